//! Feature encoding and the two from-scratch classifiers: a linear
//! max-margin model and a small sigmoid/softmax network.

mod encode;
mod linear;
mod mlp;

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::Manifest;
use crate::error::{Error, Result};

pub use encode::{encode, DenseSet, EncodedSet, Encoder, EncodingScheme, Examples, FeatureVector};
pub use linear::{train_linear, LinearHyper, LinearModel};
pub use mlp::{train_mlp, Loss, MlpHyper, MlpModel, Optimizer, MAX_PARAMS};

/// Which classifier to train, with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum TrainerConfig {
    Linear(LinearHyper),
    Mlp(MlpHyper),
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig::Mlp(MlpHyper::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    Linear(LinearModel),
    Mlp(MlpModel),
}

impl Model {
    pub fn input_dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.len(),
            Model::Mlp(m) => m.input_dim(),
        }
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<usize> {
        if x.dim != self.input_dim() {
            return Err(Error::shape(format!(
                "feature length {} for a model with input {}",
                x.dim,
                self.input_dim()
            )));
        }
        match self {
            Model::Linear(m) => Ok(m.predict(x)),
            Model::Mlp(m) => m.predict(x),
        }
    }

    /// Predictions for every example, in input order.
    pub fn predict_all(&self, set: &impl Examples) -> Result<Vec<usize>> {
        (0..set.len()).map(|i| self.predict(&set.features(i))).collect()
    }

    pub fn loss_trace(&self) -> &[f64] {
        match self {
            Model::Linear(m) => &m.loss_trace,
            Model::Mlp(m) => &m.loss_trace,
        }
    }
}

pub fn fit(cfg: &TrainerConfig, t: &impl Examples, seed: u64) -> Result<Model> {
    Ok(match cfg {
        TrainerConfig::Linear(h) => Model::Linear(train_linear(t, h, seed)?),
        TrainerConfig::Mlp(h) => Model::Mlp(train_mlp(t, h, seed)?),
    })
}

/// Hex SHA-256 of the canonical JSON form of a manifest.
pub fn manifest_hash(m: &Manifest) -> String {
    let bytes = serde_json::to_vec(m).expect("manifest serializes");
    hex::encode(Sha256::digest(bytes))
}

pub const CHECKPOINT_FORMAT: &str = "algebra-learn-model";
pub const CHECKPOINT_VERSION: u32 = 1;

/// JSON model dump: shapes and weights live inside `model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub encoder: Encoder,
    pub manifest_hash: String,
    pub model: Model,
}

impl Checkpoint {
    pub fn new(model: Model, encoder: Encoder, manifest: &Manifest) -> Self {
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            encoder,
            manifest_hash: manifest_hash(manifest),
            model,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(f, self)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let c: Checkpoint = serde_json::from_reader(f)?;
        if c.format != CHECKPOINT_FORMAT || c.version != CHECKPOINT_VERSION {
            return Err(Error::Parse(format!("unsupported checkpoint {} v{}", c.format, c.version)));
        }
        Ok(c)
    }
}
