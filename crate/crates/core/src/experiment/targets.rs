use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::metrics::{LearningCurve, LearningCurvePoint, Stat};

const TARGETS_TOML: &str = include_str!("../../data/targets.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Accuracy,
    Phi,
    F1,
    PredictedOne,
}

impl Metric {
    pub fn of(self, p: &LearningCurvePoint) -> Option<Stat> {
        match self {
            Metric::Accuracy => Some(p.accuracy),
            Metric::Phi => p.phi,
            Metric::F1 => p.f1,
            Metric::PredictedOne => Some(p.predicted_one),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Phi => "phi",
            Metric::F1 => "f1",
            Metric::PredictedOne => "predicted-one",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Reported {
    pub metric: Metric,
    pub mean: f64,
    pub std: Option<f64>,
}

/// One acceptance band. Every bound that is set must hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Rule {
    pub metric: Metric,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub abs_max: Option<f64>,
    /// Mean must exceed `0.5 + k * std`.
    pub chance_sigmas: Option<f64>,
    /// Successive curve means may drop by at most the pooled std of the pair.
    #[serde(default)]
    pub curve_non_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RecipeTargets {
    pub note: String,
    pub reported: Vec<Reported>,
    pub accept: Vec<Rule>,
}

pub fn targets() -> &'static BTreeMap<String, RecipeTargets> {
    static CELL: OnceLock<BTreeMap<String, RecipeTargets>> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(TARGETS_TOML).expect("bundled targets parse"))
}

pub fn targets_for(recipe: &str) -> Option<&'static RecipeTargets> {
    targets().get(recipe)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metric: Metric,
    pub reported_mean: f64,
    pub reported_std: Option<f64>,
    pub achieved: Option<Stat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub metric: Metric,
    pub rule: String,
    /// Mean at the headline point; absent when the metric was undefined in every repeat.
    pub achieved: Option<f64>,
    pub passed: bool,
}

impl Rule {
    pub fn describe(&self) -> String {
        let m = self.metric.name();
        let mut parts = Vec::new();
        if let Some(v) = self.min {
            parts.push(format!("{m} >= {v}"));
        }
        if let Some(v) = self.max {
            parts.push(format!("{m} <= {v}"));
        }
        if let Some(v) = self.abs_max {
            parts.push(format!("|{m}| <= {v}"));
        }
        if let Some(k) = self.chance_sigmas {
            parts.push(format!("{m} > 0.5 + {k} std"));
        }
        if self.curve_non_decreasing {
            parts.push(format!("{m} curve non-decreasing within pooled std"));
        }
        parts.join(" and ")
    }

    fn bounds_hold(&self, s: Stat) -> bool {
        self.min.is_none_or(|v| s.mean >= v)
            && self.max.is_none_or(|v| s.mean <= v)
            && self.abs_max.is_none_or(|v| s.mean.abs() <= v)
            && self.chance_sigmas.is_none_or(|k| s.mean > 0.5 + k * s.std)
    }

    pub fn check(&self, headline: &LearningCurvePoint, curve: &LearningCurve) -> CheckOutcome {
        let stat = self.metric.of(headline);
        let mut passed = stat.is_some_and(|s| self.bounds_hold(s));
        if self.curve_non_decreasing {
            passed &= non_decreasing(curve, self.metric);
        }
        CheckOutcome { metric: self.metric, rule: self.describe(), achieved: stat.map(|s| s.mean), passed }
    }
}

/// Each successive defined mean is at least the previous defined mean minus
/// the pooled standard deviation of the two points. Undefined points are
/// skipped; a curve with no defined point fails.
pub fn non_decreasing(curve: &LearningCurve, metric: Metric) -> bool {
    let stats: Vec<Stat> = curve.points.iter().filter_map(|p| metric.of(p)).collect();
    !stats.is_empty()
        && stats.windows(2).all(|w| {
            let pooled = ((w[0].std.powi(2) + w[1].std.powi(2)) / 2.0).sqrt();
            w[1].mean >= w[0].mean - pooled
        })
}

pub fn compare(reported: &[Reported], headline: &LearningCurvePoint) -> Vec<Comparison> {
    reported
        .iter()
        .map(|r| Comparison {
            metric: r.metric,
            reported_mean: r.mean,
            reported_std: r.std,
            achieved: r.metric.of(headline),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::recipes;

    fn point(acc: (f64, f64), phi: Option<(f64, f64)>) -> LearningCurvePoint {
        let st = |(mean, std)| Stat { mean, std, count: 5 };
        LearningCurvePoint {
            gamma: 0.2,
            repeats: 5,
            train_size: 100,
            accuracy: st(acc),
            phi: phi.map(st),
            f1: None,
            predicted_one: st((0.5, 0.0)),
            phi_undefined: 0,
        }
    }

    #[test]
    fn every_recipe_has_targets() {
        for r in recipes() {
            assert!(targets_for(r.name).is_some(), "{}", r.name);
        }
        assert_eq!(targets().len(), recipes().len());
    }

    #[test]
    fn bands() {
        let curve = LearningCurve { runs: vec![], points: vec![point((0.9, 0.01), Some((0.5, 0.1)))] };
        let p = &curve.points[0];
        let rule = |s: &str| -> Rule { toml::from_str(s).unwrap() };
        assert!(rule("metric = \"accuracy\"\nmin = 0.9").check(p, &curve).passed);
        assert!(!rule("metric = \"phi\"\nabs-max = 0.15").check(p, &curve).passed);
        assert!(rule("metric = \"accuracy\"\nchance-sigmas = 2.0").check(p, &curve).passed);
        let undefined = LearningCurve { runs: vec![], points: vec![point((0.5, 0.0), None)] };
        let out = rule("metric = \"phi\"\nabs-max = 0.15").check(&undefined.points[0], &undefined);
        assert!(!out.passed && out.achieved.is_none());
    }

    #[test]
    fn curve_shape_tolerates_noise() {
        let up = LearningCurve {
            runs: vec![],
            points: vec![point((0.6, 0.0), Some((0.30, 0.05))), point((0.7, 0.0), Some((0.27, 0.05)))],
        };
        assert!(non_decreasing(&up, Metric::Phi));
        let down = LearningCurve {
            runs: vec![],
            points: vec![point((0.6, 0.0), Some((0.30, 0.01))), point((0.7, 0.0), Some((0.20, 0.01)))],
        };
        assert!(!non_decreasing(&down, Metric::Phi));
    }

    #[test]
    fn curve_shape_skips_undefined_points() {
        let gap = LearningCurve {
            runs: vec![],
            points: vec![
                point((0.6, 0.0), Some((0.30, 0.01))),
                point((0.5, 0.0), None),
                point((0.7, 0.0), Some((0.35, 0.01))),
            ],
        };
        assert!(non_decreasing(&gap, Metric::Phi));
        let none = LearningCurve { runs: vec![], points: vec![point((0.5, 0.0), None)] };
        assert!(!non_decreasing(&none, Metric::Phi));
    }
}
