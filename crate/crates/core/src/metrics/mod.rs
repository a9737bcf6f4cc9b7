//! Confusion matrices, accuracy, Matthews correlation, F1 and learning curves.

mod curve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use curve::{
    evaluate, learning_curve, write_aggregate_csv, write_runs_csv, write_svg, CurveRun, LearningCurve,
    LearningCurvePoint, Stat,
};

/// Counts indexed `[predicted][actual]` over labels `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub k: usize,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Binary matrix from the four cells.
    pub fn binary(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { k: 1, counts: vec![vec![tn, fn_], vec![fp, tp]] }
    }

    pub fn n(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..=self.k).map(|i| self.counts[i][i]).sum()
    }

    pub fn predicted_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn actual_totals(&self) -> Vec<u64> {
        (0..=self.k).map(|a| self.counts.iter().map(|row| row[a]).sum()).collect()
    }

    /// `(TP, FP, FN, TN)` of a binary matrix.
    pub fn cells(&self) -> Result<(u64, u64, u64, u64)> {
        if self.k != 1 {
            return Err(Error::param(format!("binary metric on a {}-class matrix", self.k + 1)));
        }
        let c = &self.counts;
        Ok((c[1][1], c[1][0], c[0][1], c[0][0]))
    }
}

pub fn confusion(pred: &[usize], actual: &[usize], k: usize) -> Result<ConfusionMatrix> {
    if pred.len() != actual.len() {
        return Err(Error::shape(format!("{} predictions for {} labels", pred.len(), actual.len())));
    }
    let mut counts = vec![vec![0u64; k + 1]; k + 1];
    for (&p, &a) in pred.iter().zip(actual) {
        if p > k || a > k {
            return Err(Error::param(format!("label pair ({p}, {a}) outside 0..={k}")));
        }
        counts[p][a] += 1;
    }
    Ok(ConfusionMatrix { k, counts })
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    match cm.n() {
        0 => Err(Error::Undefined("accuracy of an empty confusion matrix".into())),
        n => Ok(cm.trace() as f64 / n as f64),
    }
}

/// Binary Matthews correlation; `None` when a marginal is zero.
pub fn phi_binary(cm: &ConfusionMatrix) -> Result<Option<f64>> {
    let (tp, fp, fn_, tn) = cm.cells()?;
    let (tp, fp, fn_, tn) = (tp as f64, fp as f64, fn_ as f64, tn as f64);
    let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if den == 0.0 {
        return Ok(None);
    }
    Ok(Some((tp * tn - fp * fn_) / den.sqrt()))
}

/// Multiclass correlation `(c s - sum p_k t_k) / sqrt((s^2 - sum p_k^2)(s^2 - sum t_k^2))`;
/// `None` when either factor vanishes.
pub fn phi_multiclass(cm: &ConfusionMatrix) -> Option<f64> {
    let s = cm.n() as f64;
    let c = cm.trace() as f64;
    let p = cm.predicted_totals();
    let t = cm.actual_totals();
    let pt: f64 = p.iter().zip(&t).map(|(&a, &b)| a as f64 * b as f64).sum();
    let pp: f64 = p.iter().map(|&a| (a as f64).powi(2)).sum();
    let tt: f64 = t.iter().map(|&a| (a as f64).powi(2)).sum();
    let den = (s * s - pp) * (s * s - tt);
    if den <= 0.0 {
        return None;
    }
    Some((c * s - pt) / den.sqrt())
}

/// `2TP / (2TP + FP + FN)`; `None` when `TP + FP + FN = 0`.
pub fn f1(cm: &ConfusionMatrix) -> Result<Option<f64>> {
    let (tp, fp, fn_, _) = cm.cells()?;
    if tp + fp + fn_ == 0 {
        return Ok(None);
    }
    Ok(Some(2.0 * tp as f64 / (2 * tp + fp + fn_) as f64))
}

/// Accuracy, correlation and (binary only) F1 of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub accuracy: f64,
    pub phi: Option<f64>,
    pub f1: Option<f64>,
    /// Fraction of predictions equal to 1.
    pub predicted_one: f64,
}

pub fn score(pred: &[usize], actual: &[usize], k: usize) -> Result<Scores> {
    let cm = confusion(pred, actual, k)?;
    let (phi, f1) = if k == 1 { (phi_binary(&cm)?, f1(&cm)?) } else { (phi_multiclass(&cm), None) };
    Ok(Scores {
        accuracy: accuracy(&cm)?,
        phi,
        f1,
        predicted_one: pred.iter().filter(|&&p| p == 1).count() as f64 / pred.len() as f64,
    })
}
