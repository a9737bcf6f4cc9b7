use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::SubgroupCount;
use crate::learn::{EncodingScheme, LinearHyper, Loss, MlpHyper, Optimizer, TrainerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Linear,
    Mlp,
}

/// Every knob of a run. Only `recipe` is required; [`ExperimentConfig::resolve`]
/// fills the rest from the recipe's defaults. Keys irrelevant to a recipe's
/// builder stay unset after resolution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub recipe: String,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,

    /// Training shares for a split-protocol curve.
    pub gammas: Option<Vec<f64>>,
    /// Training sizes for a split-protocol curve; converted to exact shares.
    pub train_sizes: Option<Vec<usize>>,
    pub headline_gamma: Option<f64>,
    pub headline_train_size: Option<usize>,
    /// Subsample of the training side under the fixed protocol.
    pub train_size: Option<usize>,

    pub n: Option<usize>,
    pub k_perms: Option<usize>,
    pub num_latin: Option<usize>,
    pub seen: Option<Vec<usize>>,
    /// NDJSON group-table file replacing the built-in corpus.
    pub corpus: Option<PathBuf>,
    pub max_order: Option<usize>,
    pub k_simple: Option<usize>,
    pub k_nonsimple: Option<usize>,
    pub t1: Option<usize>,
    pub t2: Option<usize>,
    pub count: Option<SubgroupCount>,
    pub s1: Option<Vec<String>>,
    pub s2: Option<Vec<String>>,
    pub pairs_per_class: Option<usize>,
    pub moduli: Option<Vec<usize>>,
    pub partition_total: Option<usize>,
    pub k_correct: Option<usize>,
    pub k_incorrect: Option<usize>,
    #[serde(alias = "N")]
    pub ring_size: Option<usize>,
    #[serde(alias = "F")]
    pub train_rings: Option<usize>,
    pub num_negative: Option<usize>,

    pub model: Option<ModelKind>,
    pub scheme: Option<EncodingScheme>,
    pub hidden: Option<Vec<usize>>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub loss: Option<Loss>,
    pub optimizer: Option<Optimizer>,
    pub lambda: Option<f64>,
}

const LIST_KEYS: &[&str] = &["gammas", "train-sizes", "seen", "s1", "s2", "moduli", "hidden"];

fn to_map(cfg: &ExperimentConfig) -> Map<String, Value> {
    match serde_json::to_value(cfg).expect("config serializes") {
        Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => unreachable!(),
    }
}

fn from_map(m: Map<String, Value>) -> Result<ExperimentConfig> {
    serde_json::from_value(Value::Object(m)).map_err(|e| Error::Parse(format!("config: {e}")))
}

/// Reads a value the way a TOML file would, so `3`, `0.5`, `true`, `[8, 8]`
/// and bare words all work on the command line.
fn parse_value(key: &str, raw: &str) -> Value {
    let parsed = |s: &str| {
        toml::from_str::<toml::Table>(&format!("v = {s}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .map(|v| serde_json::to_value(v).expect("toml value converts"))
    };
    let list = LIST_KEYS.contains(&key);
    let v = parsed(raw)
        .or_else(|| if list { parsed(&format!("[{raw}]")) } else { None })
        .unwrap_or_else(|| Value::String(raw.to_string()));
    match v {
        Value::Array(_) => v,
        // bare comma-free list values and single words
        other if list => match other {
            Value::String(s) => Value::Array(s.split(',').map(|w| Value::String(w.trim().into())).collect()),
            x => Value::Array(vec![x]),
        },
        other => other,
    }
}

impl ExperimentConfig {
    pub fn for_recipe(name: &str) -> Self {
        ExperimentConfig { recipe: name.to_string(), ..Default::default() }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Applies `key = value` overrides; keys use the file's kebab-case names.
    pub fn with_overrides<K: AsRef<str>, V: AsRef<str>>(&self, pairs: &[(K, V)]) -> Result<Self> {
        let mut m = to_map(self);
        for (k, v) in pairs {
            let key = k.as_ref().trim_start_matches("--");
            m.insert(key.to_string(), parse_value(key, v.as_ref()));
        }
        from_map(m)
    }

    /// Fields set here win over `base`.
    pub fn over(&self, base: &ExperimentConfig) -> Result<Self> {
        let mut m = to_map(base);
        m.extend(to_map(self));
        from_map(m)
    }

    /// JSON object of the keys that are set.
    pub fn to_json(&self) -> Value {
        Value::Object(to_map(self))
    }

    pub fn trainer(&self) -> Result<TrainerConfig> {
        let need = |what: &str| Error::param(format!("config is missing `{what}`"));
        Ok(match self.model.ok_or_else(|| need("model"))? {
            ModelKind::Linear => {
                let d = LinearHyper::default();
                TrainerConfig::Linear(LinearHyper {
                    lambda: self.lambda.unwrap_or(d.lambda),
                    epochs: self.epochs.unwrap_or(d.epochs),
                })
            }
            ModelKind::Mlp => {
                let d = MlpHyper::default();
                TrainerConfig::Mlp(MlpHyper {
                    hidden: self.hidden.clone().unwrap_or(d.hidden),
                    epochs: self.epochs.unwrap_or(d.epochs),
                    batch_size: self.batch_size.unwrap_or(d.batch_size),
                    learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
                    momentum: self.momentum.unwrap_or(d.momentum),
                    loss: self.loss.unwrap_or(d.loss),
                    optimizer: self.optimizer.unwrap_or(d.optimizer),
                })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_keys_are_kebab_case() {
        let c = ExperimentConfig::from_toml_str(
            "recipe = \"ring-single-12\"\nk-correct = 10\nhidden = [4, 4]\nloss = \"cross-entropy\"\n",
        )
        .unwrap();
        assert_eq!(c.k_correct, Some(10));
        assert_eq!(c.hidden, Some(vec![4, 4]));
        assert_eq!(c.loss, Some(Loss::CrossEntropy));
        assert!(ExperimentConfig::from_toml_str("recipe = \"x\"\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::from_toml_str("seed = 1\n").is_err());
    }

    #[test]
    fn overrides_parse_like_toml() {
        let c = ExperimentConfig::for_recipe("cayley-n8")
            .with_overrides(&[
                ("--seed", "7"),
                ("hidden", "64"),
                ("gammas", "0.1,0.2"),
                ("s1", "C12,A4"),
                ("scheme", "one-hot"),
                ("N", "10"),
                ("svg", "false"),
            ])
            .unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.hidden, Some(vec![64]));
        assert_eq!(c.gammas, Some(vec![0.1, 0.2]));
        assert_eq!(c.s1, Some(vec!["C12".to_string(), "A4".to_string()]));
        assert_eq!(c.scheme, Some(EncodingScheme::OneHot));
        assert_eq!(c.ring_size, Some(10));
        assert_eq!(c.svg, Some(false));
        assert!(c.with_overrides(&[("no-such-key", "1")]).is_err());
        assert!(c.with_overrides(&[("seed", "many")]).is_err());
    }

    #[test]
    fn set_fields_win() {
        let base = ExperimentConfig { seed: Some(1), epochs: Some(3), ..ExperimentConfig::for_recipe("a") };
        let top = ExperimentConfig { seed: Some(9), ..ExperimentConfig::for_recipe("a") };
        let m = top.over(&base).unwrap();
        assert_eq!((m.seed, m.epochs), (Some(9), Some(3)));
    }
}
