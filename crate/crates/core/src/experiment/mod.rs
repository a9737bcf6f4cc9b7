//! Named, versioned experiment recipes and the runner that turns one into a
//! report bundle.
//!
//! A bundle directory holds `manifest.json`, `runs.csv`, `aggregate.csv`,
//! `curve.svg` (optional), `summary.json` and `timing.json`. Only the timing
//! sidecar depends on the wall clock.

mod config;
mod recipes;
mod targets;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dataset::{self, split_indices, Dataset, Manifest, RingMatchConfig};
use crate::error::{Error, Result};
use crate::group::{self, GroupTable};
use crate::learn::{manifest_hash, Encoder, EncodingScheme, TrainerConfig};
use crate::metrics::{self, CurveRun, LearningCurve, LearningCurvePoint};
use crate::ring;

pub use config::{ExperimentConfig, ModelKind};
pub use recipes::{find_recipe, recipes, BuilderKind, Protocol, Recipe};
pub use targets::{
    non_decreasing, targets, targets_for, CheckOutcome, Comparison, Metric, RecipeTargets, Reported, Rule,
};

const COMMON_KEYS: &[&str] = &["recipe", "seed", "repeats", "out", "svg", "model", "scheme"];
const SPLIT_KEYS: &[&str] = &["gammas", "train-sizes", "headline-gamma", "headline-train-size"];
const FIXED_KEYS: &[&str] = &["train-size"];
const LINEAR_KEYS: &[&str] = &["lambda", "epochs"];
const MLP_KEYS: &[&str] =
    &["hidden", "epochs", "batch-size", "learning-rate", "momentum", "loss", "optimizer"];

fn builder_keys(b: BuilderKind) -> &'static [&'static str] {
    match b {
        BuilderKind::CayleyVsLatin => &["n", "k-perms", "num-latin"],
        BuilderKind::UnseenGroup => &["n", "seen", "k-perms", "num-latin"],
        BuilderKind::Simplicity => &["corpus", "k-simple", "k-nonsimple"],
        BuilderKind::SubgroupClasses => &["corpus", "max-order", "k-perms", "t1", "t2", "count"],
        BuilderKind::GroupIso => &["n", "s1", "s2", "pairs-per-class"],
        BuilderKind::RingMatch => &["moduli", "k-correct", "k-incorrect"],
        BuilderKind::RingPartitions => &["partition-total", "k-correct", "k-incorrect"],
        BuilderKind::RingCollection => &["ring-size", "train-rings", "k-correct", "k-incorrect"],
        BuilderKind::EntryShift => &["n", "k-perms", "num-negative"],
    }
}

/// A recipe together with a complete configuration for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub recipe: Recipe,
    pub config: ExperimentConfig,
}

fn object(v: Value) -> serde_json::Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("configs serialize to objects"),
    }
}

impl ExperimentConfig {
    /// Fills unset keys from the recipe's defaults and rejects keys the
    /// recipe's builder, protocol or model does not read.
    pub fn resolve(&self) -> Result<Resolved> {
        let recipe = find_recipe(&self.recipe)?;
        let user = object(self.to_json());
        let mut defaults = object(recipe.defaults.to_json());
        // a user-chosen curve or headline replaces the recipe's, whichever form it takes
        for pair in [["gammas", "train-sizes"], ["headline-gamma", "headline-train-size"]] {
            if pair.iter().any(|k| user.contains_key(*k)) {
                for k in pair {
                    defaults.remove(k);
                }
            }
        }
        let model = self.model.or(recipe.defaults.model).unwrap_or(ModelKind::Mlp);
        let allowed: Vec<&str> = COMMON_KEYS
            .iter()
            .chain(builder_keys(recipe.builder))
            .chain(match recipe.protocol {
                Protocol::Split => SPLIT_KEYS,
                Protocol::Fixed => FIXED_KEYS,
            })
            .chain(match model {
                ModelKind::Linear => LINEAR_KEYS,
                ModelKind::Mlp => MLP_KEYS,
            })
            .copied()
            .collect();
        if let Some(k) = user.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::param(format!("key `{k}` does not apply to recipe `{}`", recipe.name)));
        }
        defaults.extend(user);
        defaults.retain(|k, _| allowed.contains(&k.as_str()));
        let config: ExperimentConfig = serde_json::from_value(Value::Object(defaults))
            .map_err(|e| Error::Parse(format!("config: {e}")))?;
        let repeats = config.repeats.unwrap_or(0);
        let min_repeats = if recipe.protocol == Protocol::Split { 2 } else { 1 };
        if repeats < min_repeats {
            return Err(Error::param(format!("recipe `{}` needs repeats >= {min_repeats}", recipe.name)));
        }
        config.trainer()?;
        Ok(Resolved { recipe, config })
    }
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::param(format!("config is missing `{key}`")))
}

impl Resolved {
    pub fn seed(&self) -> u64 {
        self.config.seed.unwrap_or(0)
    }

    pub fn repeats(&self) -> usize {
        self.config.repeats.unwrap_or(1)
    }

    /// Seed of repeat `r`: the base seed plus `r`.
    pub fn repeat_seed(&self, r: usize) -> u64 {
        self.seed().wrapping_add(r as u64)
    }

    pub fn trainer(&self) -> TrainerConfig {
        self.config.trainer().expect("validated in resolve")
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.config.scheme.unwrap_or(EncodingScheme::OneHot)
    }

    /// Corpus description recorded in the summary.
    pub fn corpus(&self) -> Option<String> {
        match self.recipe.builder {
            BuilderKind::Simplicity => Some(match &self.config.corpus {
                Some(p) => format!("external: {}", p.display()),
                None => "catalog(32) + A5 + A6".into(),
            }),
            BuilderKind::SubgroupClasses => Some(match &self.config.corpus {
                Some(p) => format!("external: {}", p.display()),
                None => format!("catalog({})", self.config.max_order.unwrap_or(32)),
            }),
            _ => None,
        }
    }
}

/// What a builder emitted.
#[derive(Debug, Clone)]
pub enum Built {
    Single(Dataset),
    Pair { train: Dataset, valid: Dataset },
}

impl Built {
    pub fn parts(&self) -> Vec<(&'static str, &Dataset)> {
        match self {
            Built::Single(d) => vec![("all", d)],
            Built::Pair { train, valid } => vec![("train", train), ("valid", valid)],
        }
    }
}

fn named_groups(names: &[String], n: usize) -> Result<Vec<GroupTable>> {
    let pool = group::groups_of_order(n);
    names
        .iter()
        .map(|name| {
            pool.iter()
                .find(|g| g.name() == name)
                .cloned()
                .ok_or_else(|| Error::param(format!("no catalog group named `{name}` of order {n}")))
        })
        .collect()
}

fn ring_cfg(c: &ExperimentConfig) -> Result<RingMatchConfig> {
    Ok(RingMatchConfig {
        k_correct: need(&c.k_correct, "k-correct")?,
        k_incorrect: need(&c.k_incorrect, "k-incorrect")?,
    })
}

/// Runs the recipe's builder with `seed`.
pub fn build_datasets(r: &Resolved, seed: u64) -> Result<Built> {
    let c = &r.config;
    Ok(match r.recipe.builder {
        BuilderKind::CayleyVsLatin => Built::Single(dataset::build_cayley_vs_latin(
            need(&c.n, "n")?,
            need(&c.k_perms, "k-perms")?,
            need(&c.num_latin, "num-latin")?,
            seed,
        )?),
        BuilderKind::UnseenGroup => {
            let (train, valid) = dataset::build_unseen_group_split(
                need(&c.n, "n")?,
                &need(&c.seen, "seen")?,
                need(&c.k_perms, "k-perms")?,
                need(&c.num_latin, "num-latin")?,
                seed,
            )?;
            Built::Pair { train, valid }
        }
        BuilderKind::Simplicity => {
            let corpus = match &c.corpus {
                Some(p) => group::import_tables(p)?,
                None => dataset::simplicity_desk_corpus(),
            };
            Built::Single(dataset::build_simplicity(
                &corpus,
                need(&c.k_simple, "k-simple")?,
                need(&c.k_nonsimple, "k-nonsimple")?,
                seed,
            )?)
        }
        BuilderKind::SubgroupClasses => {
            let corpus = match &c.corpus {
                Some(p) => group::import_tables(p)?,
                None => group::catalog(need(&c.max_order, "max-order")?),
            };
            Built::Single(dataset::build_subgroup_classes(
                &corpus,
                (need(&c.t1, "t1")?, need(&c.t2, "t2")?),
                need(&c.k_perms, "k-perms")?,
                need(&c.count, "count")?,
                seed,
            )?)
        }
        BuilderKind::GroupIso => {
            let n = need(&c.n, "n")?;
            let s1 = named_groups(&need(&c.s1, "s1")?, n)?;
            let s2 = named_groups(&need(&c.s2, "s2")?, n)?;
            let (train, valid) =
                dataset::build_group_iso_pairs(&s1, &s2, need(&c.pairs_per_class, "pairs-per-class")?, seed)?;
            Built::Pair { train, valid }
        }
        BuilderKind::RingMatch => {
            let ring = ring::cyclic_product_ring(&need(&c.moduli, "moduli")?)?;
            Built::Single(dataset::build_ring_match(&[ring], ring_cfg(c)?, seed)?)
        }
        BuilderKind::RingPartitions => {
            let rings = ring::partitions(need(&c.partition_total, "partition-total")?)
                .iter()
                .map(|p| ring::two_power_ring(p))
                .collect::<Result<Vec<_>>>()?;
            Built::Single(dataset::build_ring_match(&rings, ring_cfg(c)?, seed)?)
        }
        BuilderKind::RingCollection => {
            let (train, valid) = dataset::build_ring_collection(
                need(&c.ring_size, "ring-size")?,
                need(&c.train_rings, "train-rings")?,
                ring_cfg(c)?,
                seed,
            )?;
            Built::Pair { train, valid }
        }
        BuilderKind::EntryShift => Built::Single(dataset::build_entry_shift(
            need(&c.n, "n")?,
            need(&c.k_perms, "k-perms")?,
            need(&c.num_negative, "num-negative")?,
            seed,
        )?),
    })
}

/// Identity of one dataset a run used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRef {
    pub role: String,
    pub repeat: Option<usize>,
    pub seed: u64,
    pub records: usize,
    pub label_counts: Vec<usize>,
    pub manifest_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    #[serde(flatten)]
    pub dataset: DatasetRef,
    pub manifest: Manifest,
}

fn entry(role: &str, repeat: Option<usize>, seed: u64, d: &Dataset) -> ManifestEntry {
    ManifestEntry {
        dataset: DatasetRef {
            role: role.into(),
            repeat,
            seed,
            records: d.len(),
            label_counts: d.label_counts(),
            manifest_hash: manifest_hash(&d.manifest),
        },
        manifest: d.manifest.clone(),
    }
}

/// In-memory result of a run, before anything touches the filesystem.
#[derive(Debug, Clone)]
pub struct Execution {
    pub resolved: Resolved,
    pub curve: LearningCurve,
    pub manifests: Vec<ManifestEntry>,
    /// Index into `curve.points`.
    pub headline: usize,
}

impl Execution {
    pub fn headline_point(&self) -> &LearningCurvePoint {
        &self.curve.points[self.headline]
    }
}

fn split_gammas(c: &ExperimentConfig, len: usize) -> Result<Vec<f64>> {
    if let Some(sizes) = &c.train_sizes {
        if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || s >= len) {
            return Err(Error::param(format!("training size {bad} must lie in 1..{len}")));
        }
        return Ok(sizes.iter().map(|&s| s as f64 / len as f64).collect());
    }
    match &c.gammas {
        Some(g) if !g.is_empty() => Ok(g.clone()),
        _ => Err(Error::param("split protocol needs `gammas` or `train-sizes`")),
    }
}

fn headline_index(c: &ExperimentConfig, curve: &LearningCurve) -> usize {
    let found = if let Some(size) = c.headline_train_size {
        curve.points.iter().position(|p| p.train_size == size)
    } else if let Some(g) = c.headline_gamma {
        curve.points.iter().position(|p| (p.gamma - g).abs() < 1e-12)
    } else {
        None
    };
    found.unwrap_or(curve.points.len() - 1)
}

/// Builds, trains and scores every repeat of a resolved recipe.
pub fn execute(r: &Resolved) -> Result<Execution> {
    let trainer = r.trainer();
    let scheme = r.scheme();
    let seeds: Vec<u64> = (0..r.repeats()).map(|i| r.repeat_seed(i)).collect();
    let (curve, manifests) = match r.recipe.protocol {
        Protocol::Split => {
            let data = match build_datasets(r, r.seed())? {
                Built::Single(d) => d,
                Built::Pair { .. } => unreachable!("split recipes use single-dataset builders"),
            };
            log::info!("{}: {} records", r.recipe.name, data.len());
            let gammas = split_gammas(&r.config, data.len())?;
            let curve = metrics::learning_curve(&data, &gammas, &seeds, &trainer, scheme)?;
            (curve, vec![entry("all", None, r.seed(), &data)])
        }
        Protocol::Fixed => {
            let cells = seeds
                .par_iter()
                .enumerate()
                .map(|(i, &seed)| -> Result<(CurveRun, Vec<ManifestEntry>)> {
                    let (train, valid) = match build_datasets(r, seed)? {
                        Built::Pair { train, valid } => (train, valid),
                        Built::Single(_) => unreachable!("fixed recipes use two-sided builders"),
                    };
                    let entries =
                        vec![entry("train", Some(i), seed, &train), entry("valid", Some(i), seed, &valid)];
                    let train = match r.config.train_size {
                        Some(size) if size < train.len() => {
                            let (idx, _) =
                                split_indices(train.len(), size as f64 / train.len() as f64, seed)?;
                            train.subset(&idx)
                        }
                        Some(size) if size > train.len() => {
                            return Err(Error::param(format!(
                                "train-size {size} exceeds the {} training records",
                                train.len()
                            )))
                        }
                        _ => train,
                    };
                    let encoder = Encoder::for_datasets(scheme, &[&train, &valid])?;
                    let run = metrics::evaluate(&train, &valid, encoder, &trainer, seed)?;
                    Ok((CurveRun { repeat: i, ..run }, entries))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut runs = Vec::new();
            let mut manifests = Vec::new();
            for (run, e) in cells {
                runs.push(run);
                manifests.extend(e);
            }
            (LearningCurve::from_runs(runs), manifests)
        }
    };
    let headline = headline_index(&r.config, &curve);
    Ok(Execution { resolved: r.clone(), curve, manifests, headline })
}

/// Everything `report` needs, written as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub recipe: String,
    pub version: u32,
    pub description: String,
    pub builder: String,
    pub protocol: String,
    pub corpus: Option<String>,
    /// The resolved configuration minus `out`; rerunning it reproduces this bundle.
    pub config: Value,
    pub datasets: Vec<DatasetRef>,
    pub headline: LearningCurvePoint,
    pub curve: Vec<LearningCurvePoint>,
    pub reference_note: String,
    pub comparisons: Vec<Comparison>,
    pub checks: Vec<CheckOutcome>,
    /// True when every acceptance check passed (vacuously true without checks).
    pub passed: bool,
}

impl Summary {
    pub fn from_execution(x: &Execution) -> Summary {
        let r = &x.resolved;
        let headline = x.headline_point().clone();
        let t = targets_for(r.recipe.name);
        let comparisons = t.map(|t| targets::compare(&t.reported, &headline)).unwrap_or_default();
        let checks: Vec<CheckOutcome> = t
            .map(|t| t.accept.iter().map(|rule| rule.check(&headline, &x.curve)).collect())
            .unwrap_or_default();
        let name = |v: Value| v.as_str().unwrap_or_default().to_string();
        Summary {
            recipe: r.recipe.name.into(),
            version: r.recipe.version,
            description: r.recipe.description.into(),
            builder: name(serde_json::to_value(r.recipe.builder).expect("serializes")),
            protocol: name(serde_json::to_value(r.recipe.protocol).expect("serializes")),
            corpus: r.corpus(),
            config: ExperimentConfig { out: None, ..r.config.clone() }.to_json(),
            datasets: x.manifests.iter().map(|m| m.dataset.clone()).collect(),
            passed: checks.iter().all(|c| c.passed),
            headline,
            curve: x.curve.points.clone(),
            reference_note: t.map(|t| t.note.clone()).unwrap_or_default(),
            comparisons,
            checks,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Summary> {
        let f = std::io::BufReader::new(File::open(path)?);
        Ok(serde_json::from_reader(f)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub finished_unix_seconds: u64,
    pub elapsed_seconds: f64,
}

/// Writes the report bundle of `x` into `dir`.
pub fn write_bundle(dir: &Path, x: &Execution) -> Result<Summary> {
    std::fs::create_dir_all(dir)?;
    let create =
        |name: &str| -> Result<BufWriter<File>> { Ok(BufWriter::new(File::create(dir.join(name))?)) };
    let task = x.resolved.recipe.name;
    serde_json::to_writer_pretty(create("manifest.json")?, &x.manifests)?;
    metrics::write_runs_csv(create("runs.csv")?, task, &x.curve)?;
    metrics::write_aggregate_csv(create("aggregate.csv")?, task, &x.curve)?;
    if x.resolved.config.svg.unwrap_or(false) {
        metrics::write_svg(create("curve.svg")?, task, &x.curve)?;
    }
    let summary = Summary::from_execution(x);
    serde_json::to_writer_pretty(create("summary.json")?, &summary)?;
    Ok(summary)
}

/// Output directory of a resolved config: `out` if set, else
/// `<default_root>/<recipe>`.
pub fn output_dir(r: &Resolved, default_root: &Path) -> PathBuf {
    r.config.out.clone().unwrap_or_else(|| default_root.join(r.recipe.name))
}

/// Resolves, executes and writes the bundle plus the timing sidecar.
pub fn run(cfg: &ExperimentConfig, default_root: &Path) -> Result<(PathBuf, Summary)> {
    let start = Instant::now();
    let resolved = cfg.resolve()?;
    let dir = output_dir(&resolved, default_root);
    let x = execute(&resolved)?;
    let summary = write_bundle(&dir, &x)?;
    let timing = Timing {
        finished_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    serde_json::to_writer_pretty(File::create(dir.join("timing.json"))?, &timing)?;
    Ok((dir, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_ring() -> ExperimentConfig {
        ExperimentConfig::for_recipe("ring-single-12")
            .with_overrides(&[
                ("moduli", "[2, 3]"),
                ("k-correct", "20"),
                ("k-incorrect", "20"),
                ("train-sizes", "[10, 20]"),
                ("headline-train-size", "20"),
                ("repeats", "2"),
                ("epochs", "2"),
            ])
            .unwrap()
    }

    #[test]
    fn resolve_fills_and_filters() {
        let r = tiny_ring().resolve().unwrap();
        assert_eq!(r.config.moduli, Some(vec![2, 3]));
        assert_eq!(r.config.hidden, Some(vec![32]));
        assert_eq!(r.config.n, None);
        let bad = ExperimentConfig { n: Some(8), ..tiny_ring() };
        assert!(bad.resolve().is_err());
        let linear = ExperimentConfig { model: Some(ModelKind::Linear), ..tiny_ring() };
        assert_eq!(linear.resolve().unwrap().config.hidden, None);
        let clash = ExperimentConfig { model: Some(ModelKind::Linear), hidden: Some(vec![3]), ..tiny_ring() };
        assert!(clash.resolve().is_err());
        assert!(ExperimentConfig::for_recipe("missing").resolve().is_err());
    }

    #[test]
    fn user_gammas_replace_recipe_sizes() {
        let c = ExperimentConfig { gammas: Some(vec![0.3]), ..ExperimentConfig::for_recipe("cayley-n8") };
        let r = c.resolve().unwrap();
        assert_eq!((r.config.train_sizes, r.config.headline_train_size), (None, Some(5000)));
    }

    #[test]
    fn execution_is_deterministic_and_summarized() {
        let r = tiny_ring().resolve().unwrap();
        let a = execute(&r).unwrap();
        let b = execute(&r).unwrap();
        assert_eq!(a.curve, b.curve);
        assert_eq!(a.curve.points.len(), 2);
        assert_eq!(a.headline_point().train_size, 20);
        let s = Summary::from_execution(&a);
        assert_eq!(s.comparisons.len(), 2);
        assert_eq!(s.datasets.len(), 1);
        assert_eq!(s.config["moduli"], serde_json::json!([2, 3]));
    }

    #[test]
    fn fixed_protocol_runs_each_repeat() {
        let c = ExperimentConfig::for_recipe("ring-collection-10")
            .with_overrides(&[
                ("ring-size", "6"),
                ("train-rings", "3"),
                ("k-correct", "10"),
                ("k-incorrect", "10"),
                ("repeats", "2"),
                ("epochs", "2"),
            ])
            .unwrap();
        let x = execute(&c.resolve().unwrap()).unwrap();
        assert_eq!(x.curve.runs.len(), 2);
        assert_eq!(x.curve.points.len(), 1);
        assert_eq!(x.manifests.len(), 4);
        assert_ne!(x.manifests[0].dataset.manifest_hash, x.manifests[2].dataset.manifest_hash);
    }
}
