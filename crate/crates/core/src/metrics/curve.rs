use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{score, Scores};
use crate::dataset::{split_indices, Dataset};
use crate::error::{Error, Result};
use crate::learn::{fit, EncodedSet, Encoder, EncodingScheme, TrainerConfig};

/// Mean and sample standard deviation over the defined values of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    /// How many repeats contributed.
    pub count: usize,
}

impl Stat {
    /// `None` when no value is defined; `std` is 0 for a single value.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Stat> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        // sorted summation keeps the result independent of repeat order
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let mut dev: Vec<f64> = v.iter().map(|x| (x - mean).powi(2)).collect();
        dev.sort_by(f64::total_cmp);
        let std = if v.len() > 1 { (dev.iter().sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
        Some(Stat { mean, std, count: v.len() })
    }
}

/// One trained-and-scored split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRun {
    pub gamma: f64,
    pub repeat: usize,
    pub seed: u64,
    pub train_size: usize,
    pub valid_size: usize,
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurvePoint {
    pub gamma: f64,
    pub repeats: usize,
    pub train_size: usize,
    pub accuracy: Stat,
    pub phi: Option<Stat>,
    pub f1: Option<Stat>,
    pub predicted_one: Stat,
    /// Repeats whose correlation was undefined.
    pub phi_undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub runs: Vec<CurveRun>,
    pub points: Vec<LearningCurvePoint>,
}

impl LearningCurve {
    /// Groups runs by `gamma` in order of first appearance.
    pub fn from_runs(runs: Vec<CurveRun>) -> Self {
        let mut gammas: Vec<f64> = Vec::new();
        for r in &runs {
            if !gammas.contains(&r.gamma) {
                gammas.push(r.gamma);
            }
        }
        let points = gammas
            .iter()
            .map(|&g| {
                let cell: Vec<&CurveRun> = runs.iter().filter(|r| r.gamma == g).collect();
                LearningCurvePoint {
                    gamma: g,
                    repeats: cell.len(),
                    train_size: cell[0].train_size,
                    accuracy: Stat::of(cell.iter().map(|r| r.scores.accuracy)).unwrap(),
                    phi: Stat::of(cell.iter().filter_map(|r| r.scores.phi)),
                    f1: Stat::of(cell.iter().filter_map(|r| r.scores.f1)),
                    predicted_one: Stat::of(cell.iter().map(|r| r.scores.predicted_one)).unwrap(),
                    phi_undefined: cell.iter().filter(|r| r.scores.phi.is_none()).count(),
                }
            })
            .collect();
        LearningCurve { runs, points }
    }
}

/// For each `gamma`, one seeded split, fit and validation score per entry of
/// `seeds`. Cells run concurrently; results come back in `(gamma, seed)` order.
pub fn learning_curve(
    data: &Dataset,
    gammas: &[f64],
    seeds: &[u64],
    trainer: &TrainerConfig,
    scheme: EncodingScheme,
) -> Result<LearningCurve> {
    if seeds.len() < 2 {
        return Err(Error::param("a learning curve needs at least two repeats"));
    }
    if let Some(g) = gammas.iter().find(|&&g| !(g > 0.0 && g < 1.0)) {
        return Err(Error::param(format!("gamma must lie in (0, 1), got {g}")));
    }
    let encoder = Encoder::for_datasets(scheme, &[data])?;
    let cells: Vec<(f64, usize, u64)> =
        gammas.iter().flat_map(|&g| seeds.iter().enumerate().map(move |(r, &s)| (g, r, s))).collect();
    let runs = cells
        .into_par_iter()
        .map(|(gamma, repeat, seed)| {
            let (t, v) = split_indices(data.len(), gamma, seed)?;
            if v.is_empty() || t.is_empty() {
                return Err(Error::param(format!("gamma {gamma} leaves one side empty")));
            }
            let run = evaluate(&data.subset(&t), &data.subset(&v), encoder, trainer, seed)?;
            Ok(CurveRun { gamma, repeat, ..run })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LearningCurve::from_runs(runs))
}

/// Fits on `train` and scores on `valid`; `gamma` is the training share.
pub fn evaluate(
    train: &Dataset,
    valid: &Dataset,
    encoder: Encoder,
    trainer: &TrainerConfig,
    seed: u64,
) -> Result<CurveRun> {
    let tset = EncodedSet::new(train, encoder)?;
    let vset = EncodedSet::new(valid, encoder)?;
    let model = fit(trainer, &tset, seed)?;
    let pred = model.predict_all(&vset)?;
    let k = train.classes().max(valid.classes());
    Ok(CurveRun {
        gamma: train.len() as f64 / (train.len() + valid.len()) as f64,
        repeat: 0,
        seed,
        train_size: train.len(),
        valid_size: valid.len(),
        scores: score(&pred, &valid.labels(), k)?,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

fn opt_stat(s: Option<Stat>) -> [String; 2] {
    match s {
        Some(s) => [s.mean.to_string(), s.std.to_string()],
        None => ["undefined".into(), "undefined".into()],
    }
}

/// One row per run: `task, gamma, repeat, seed, train_size, valid_size, accuracy, phi, f1, predicted_one`.
pub fn write_runs_csv(w: impl Write, task: &str, curve: &LearningCurve) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "task",
        "gamma",
        "repeat",
        "seed",
        "train_size",
        "valid_size",
        "accuracy",
        "phi",
        "f1",
        "predicted_one",
    ])
    .map_err(csv_err)?;
    for r in &curve.runs {
        out.write_record([
            task.to_string(),
            r.gamma.to_string(),
            r.repeat.to_string(),
            r.seed.to_string(),
            r.train_size.to_string(),
            r.valid_size.to_string(),
            r.scores.accuracy.to_string(),
            opt(r.scores.phi),
            opt(r.scores.f1),
            r.scores.predicted_one.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// One row per gamma with mean and sample std of each metric.
pub fn write_aggregate_csv(w: impl Write, task: &str, curve: &LearningCurve) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "task",
        "gamma",
        "repeats",
        "train_size",
        "accuracy_mean",
        "accuracy_std",
        "phi_mean",
        "phi_std",
        "phi_undefined",
        "f1_mean",
        "f1_std",
        "predicted_one_mean",
        "predicted_one_std",
    ])
    .map_err(csv_err)?;
    for p in &curve.points {
        let [pm, ps] = opt_stat(p.phi);
        let [fm, fs] = opt_stat(p.f1);
        out.write_record([
            task.to_string(),
            p.gamma.to_string(),
            p.repeats.to_string(),
            p.train_size.to_string(),
            p.accuracy.mean.to_string(),
            p.accuracy.std.to_string(),
            pm,
            ps,
            p.phi_undefined.to_string(),
            fm,
            fs,
            p.predicted_one.mean.to_string(),
            p.predicted_one.std.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Line plot of mean accuracy and mean correlation against gamma with
/// one-std error bars.
pub fn write_svg(mut w: impl Write, title: &str, curve: &LearningCurve) -> Result<()> {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    let pts = &curve.points;
    let (gmin, gmax) = pts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.gamma), b.max(p.gamma)));
    let span = if gmax > gmin { gmax - gmin } else { 1.0 };
    let sx = |g: f64| M + (g - gmin) / span * (W - 2.0 * M);
    // vertical range [-1, 1] covers both metrics
    let sy = |v: f64| H - M - (v.clamp(-1.0, 1.0) + 1.0) / 2.0 * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, xml_escape(title));
    let _ = writeln!(s, r#"<line x1="{M}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, H - M, W - M, H - M);
    let _ = writeln!(s, r#"<line x1="{M}" y1="{M}" x2="{M}" y2="{}" stroke="black"/>"#, H - M);
    for v in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = sy(v);
        let _ = writeln!(s, r##"<line x1="{M}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##, W - M);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v}</text>"#, M - 5.0, y + 4.0);
    }
    for p in pts {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{:.3}</text>"#,
            sx(p.gamma),
            H - M + 16.0,
            p.gamma
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">training fraction</text>"#,
        W / 2.0,
        H - 10.0
    );

    let series: [(&str, &str, Vec<Option<Stat>>); 2] = [
        ("accuracy", "#1f77b4", pts.iter().map(|p| Some(p.accuracy)).collect()),
        ("phi", "#d62728", pts.iter().map(|p| p.phi).collect()),
    ];
    for (k, (name, color, stats)) in series.iter().enumerate() {
        let path: Vec<String> = pts
            .iter()
            .zip(stats)
            .filter_map(|(p, st)| st.map(|st| format!("{},{}", sx(p.gamma), sy(st.mean))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        for (p, st) in pts.iter().zip(stats) {
            if let Some(st) = st {
                let x = sx(p.gamma);
                let _ = writeln!(
                    s,
                    r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="{color}"/><circle cx="{x}" cy="{}" r="3" fill="{color}"/>"#,
                    sy(st.mean - st.std),
                    sy(st.mean + st.std),
                    sy(st.mean)
                );
            }
        }
        let ly = M + 15.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{color}">{name}</text>"#, W - M - 60.0);
    }
    s.push_str("</svg>\n");
    w.write_all(s.as_bytes())?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
