mod oracle;
mod settings;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algebra_learn::dataset::{read_dataset, write_dataset, Dataset};
use algebra_learn::experiment::{
    self, build_datasets, find_recipe, recipes, BuilderKind, Built, ExperimentConfig, ModelKind, Summary,
};
use algebra_learn::learn::EncodingScheme;
use algebra_learn::metrics;
use clap::{Parser, Subcommand};

const OUT_ENV: &str = "ALGEBRA_LEARN_OUT";

#[derive(Parser)]
#[command(
    name = "algebra-learn",
    version,
    about = "Exact algebraic datasets, from-scratch classifiers and experiment recipes"
)]
struct Cli {
    /// Log progress to stderr (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Default output root
    #[arg(long, env = OUT_ENV, default_value = "out", global = true)]
    out_root: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a dataset and write it as NDJSON.
    ///
    /// BUILDER is a builder name (cayley-vs-latin, unseen-group, simplicity,
    /// subgroup-classes, group-iso, ring-match, ring-partitions,
    /// ring-collection, entry-shift) or a recipe name. Settings such as
    /// `--n 12`, `--seed 3` or `N=10` override the defaults; `--out FILE`
    /// picks the output path.
    Gen {
        builder: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "SETTINGS")]
        settings: Vec<String>,
    },
    /// Run a named recipe and write its report bundle.
    ///
    /// Keys come from `--config FILE` (TOML) and are overridden by settings
    /// of the same name, e.g. `--recipe cayley-n8 --repeats 5 --epochs 40`.
    Run {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "SETTINGS")]
        settings: Vec<String>,
    },
    /// Stream exact verdicts for table or dataset NDJSON (stdin when no file is given).
    Oracle {
        #[arg(value_enum)]
        check: oracle::Check,
        input: Option<PathBuf>,
    },
    /// Learning curve over an existing dataset file.
    ///
    /// Accepts --gammas, --train-sizes, --repeats, --seed, --model, --scheme,
    /// the model hyperparameters, --svg and --out DIR.
    Curve {
        input: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "SETTINGS")]
        settings: Vec<String>,
    },
    /// Print the comparison stored in a report bundle.
    Report {
        /// Bundle directory or its summary.json
        path: PathBuf,
        /// Exit with status 3 when an acceptance band is missed
        #[arg(long)]
        strict: bool,
    },
    /// List the recipe registry.
    Recipes,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Miss(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Miss(_) => 3,
        }
    }
}

impl From<algebra_learn::Error> for Failure {
    fn from(e: algebra_learn::Error) -> Self {
        match e {
            algebra_learn::Error::UnknownRecipe(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn config_from(pairs: &[(String, String)], base: ExperimentConfig) -> Result<ExperimentConfig, Failure> {
    base.with_overrides(pairs).map_err(|e| Failure::Usage(e.to_string()))
}

fn print_counts(path: &Path, d: &Dataset) {
    let counts: Vec<String> = d.label_counts().iter().enumerate().map(|(l, c)| format!("{l}: {c}")).collect();
    println!(
        "{}: {} records, n_max {}, labels {{{}}}",
        path.display(),
        d.len(),
        d.n_max(),
        counts.join(", ")
    );
}

fn write_file(path: &Path, d: &Dataset) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_dataset(&mut w, d)?;
    w.flush()?;
    print_counts(path, d);
    Ok(())
}

fn with_suffix(path: &Path, side: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "ndjson".into());
    path.with_file_name(format!("{stem}.{side}.{ext}"))
}

fn gen(root: &Path, name: &str, tokens: &[String]) -> Result<(), Failure> {
    let mut pairs = settings::parse(tokens)?;
    let out = settings::take(&mut pairs, "out").map(PathBuf::from);
    let user = config_from(&pairs, ExperimentConfig::default())?;
    let recipe = match BuilderKind::from_name(name) {
        // among recipes driving this builder, prefer one whose default order matches
        Some(b) => recipes()
            .into_iter()
            .find(|r| r.builder == b && user.n.is_some() && r.defaults.n == user.n)
            .map_or_else(|| b.base_recipe().to_string(), |r| r.name.to_string()),
        None => find_recipe(name)
            .map_err(|_| Failure::Usage(format!("`{name}` is neither a builder nor a recipe")))?
            .name
            .to_string(),
    };
    let resolved =
        ExperimentConfig { recipe, ..user }.resolve().map_err(|e| Failure::Usage(e.to_string()))?;
    let out = out.unwrap_or_else(|| root.join(format!("{name}.ndjson")));
    match build_datasets(&resolved, resolved.seed())? {
        Built::Single(d) => write_file(&out, &d),
        Built::Pair { train, valid } => {
            write_file(&with_suffix(&out, "train"), &train)?;
            write_file(&with_suffix(&out, "valid"), &valid)
        }
    }
}

fn run(root: &Path, tokens: &[String]) -> Result<(), Failure> {
    let mut pairs = settings::parse(tokens)?;
    let base = match settings::take(&mut pairs, "config") {
        Some(path) => ExperimentConfig::load(&path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => ExperimentConfig::default(),
    };
    let cfg = config_from(&pairs, base)?;
    if cfg.recipe.is_empty() {
        return Err(Failure::Usage("no recipe given; use --recipe NAME or a config file".into()));
    }
    cfg.resolve().map_err(|e| Failure::Usage(e.to_string()))?;
    let (dir, summary) = experiment::run(&cfg, root)?;
    println!("wrote {}", dir.display());
    print_summary(&summary);
    Ok(())
}

fn curve(root: &Path, input: &Path, tokens: &[String]) -> Result<(), Failure> {
    const ALLOWED: &[&str] = &[
        "gammas",
        "train-sizes",
        "repeats",
        "seed",
        "model",
        "scheme",
        "hidden",
        "epochs",
        "batch-size",
        "learning-rate",
        "momentum",
        "loss",
        "optimizer",
        "lambda",
        "svg",
        "out",
    ];
    let pairs = settings::parse(tokens)?;
    if let Some((k, _)) = pairs.iter().find(|(k, _)| !ALLOWED.contains(&k.as_str())) {
        return Err(Failure::Usage(format!("`curve` does not take --{k}")));
    }
    let c = config_from(&pairs, ExperimentConfig::default())?;
    let data = read_dataset(BufReader::new(File::open(input)?))?;
    let gammas = match (&c.train_sizes, &c.gammas) {
        (Some(sizes), _) => sizes.iter().map(|&s| s as f64 / data.len() as f64).collect(),
        (None, Some(g)) => g.clone(),
        (None, None) => vec![0.1, 0.2, 0.3, 0.4, 0.5],
    };
    let seed = c.seed.unwrap_or(1);
    let seeds: Vec<u64> = (0..c.repeats.unwrap_or(5)).map(|r| seed.wrapping_add(r as u64)).collect();
    let cfg = ExperimentConfig { model: Some(c.model.unwrap_or(ModelKind::Mlp)), ..c.clone() };
    let trainer = cfg.trainer()?;
    let scheme = c.scheme.unwrap_or(EncodingScheme::OneHot);
    let lc = metrics::learning_curve(&data, &gammas, &seeds, &trainer, scheme)?;
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "data".into());
    let dir = c.out.clone().unwrap_or_else(|| root.join(format!("curve-{stem}")));
    std::fs::create_dir_all(&dir)?;
    let task = &data.manifest.builder;
    metrics::write_runs_csv(BufWriter::new(File::create(dir.join("runs.csv"))?), task, &lc)?;
    metrics::write_aggregate_csv(BufWriter::new(File::create(dir.join("aggregate.csv"))?), task, &lc)?;
    if c.svg.unwrap_or(true) {
        metrics::write_svg(BufWriter::new(File::create(dir.join("curve.svg"))?), task, &lc)?;
    }
    println!("wrote {}", dir.display());
    println!("{:>8} {:>7} {:>17} {:>17}", "gamma", "train", "accuracy", "phi");
    for p in &lc.points {
        println!(
            "{:>8.4} {:>7} {:>17} {:>17}",
            p.gamma,
            p.train_size,
            fmt_stat(Some(p.accuracy)),
            fmt_stat(p.phi)
        );
    }
    Ok(())
}

fn fmt_stat(s: Option<metrics::Stat>) -> String {
    match s {
        Some(s) => format!("{:.4} ± {:.4}", s.mean, s.std),
        None => "undefined".into(),
    }
}

fn print_summary(s: &Summary) {
    println!("recipe {} v{} ({}, {} builder)", s.recipe, s.version, s.protocol, s.builder);
    if let Some(c) = &s.corpus {
        println!("corpus: {c}");
    }
    let h = &s.headline;
    println!("headline: {} training records (gamma {:.4}), {} repeats", h.train_size, h.gamma, h.repeats);
    if h.phi_undefined > 0 {
        println!("phi undefined in {} of {} repeats", h.phi_undefined, h.repeats);
    }
    println!("{:<14} {:>17} {:>17}", "metric", "achieved", "reference");
    for c in &s.comparisons {
        let reported = match c.reported_std {
            Some(sd) => format!("{:.4} ± {:.4}", c.reported_mean, sd),
            None => format!("{:.4}", c.reported_mean),
        };
        println!("{:<14} {:>17} {:>17}", c.metric.name(), fmt_stat(c.achieved), reported);
    }
    for c in &s.checks {
        let got = c.achieved.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"));
        println!("{} {} (achieved {got})", if c.passed { "PASS" } else { "FAIL" }, c.rule);
    }
    if !s.reference_note.is_empty() {
        println!("note: {}", s.reference_note);
    }
}

fn report(path: &Path, strict: bool) -> Result<(), Failure> {
    let file = if path.is_dir() { path.join("summary.json") } else { path.to_path_buf() };
    let s = Summary::load(&file)?;
    print_summary(&s);
    if strict && !s.passed {
        return Err(Failure::Miss(format!("{}: acceptance band missed", s.recipe)));
    }
    Ok(())
}

fn oracle(check: oracle::Check, input: Option<&Path>) -> Result<(), Failure> {
    let reader: Box<dyn BufRead> = match input {
        Some(p) if p != Path::new("-") => Box::new(BufReader::new(File::open(p)?)),
        _ => Box::new(io::stdin().lock()),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    let t = match oracle::run(check, reader, &mut out, &mut err) {
        Ok(t) => t,
        // a closed downstream pipe ends the stream quietly
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
        Err(e) => return Err(e.into()),
    };
    eprintln!("{} records, {} disagreements, {} malformed lines", t.records, t.disagreements, t.malformed);
    if t.failed() {
        return Err(Failure::Data("oracle check failed".into()));
    }
    Ok(())
}

fn list_recipes() {
    for r in recipes() {
        println!("{:<20} v{}  {:<16} {}", r.name, r.version, r.builder.name(), r.description);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    let root = cli.out_root.as_path();
    let result = match &cli.cmd {
        Cmd::Gen { builder, settings } => gen(root, builder, settings),
        Cmd::Run { settings } => run(root, settings),
        Cmd::Oracle { check, input } => oracle(*check, input.as_deref()),
        Cmd::Curve { input, settings } => curve(root, input, settings),
        Cmd::Report { path, strict } => report(path, *strict),
        Cmd::Recipes => {
            list_recipes();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Data(m) | Failure::Miss(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
