use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Examples, FeatureVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct LinearHyper {
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for LinearHyper {
    fn default() -> Self {
        LinearHyper { lambda: 1e-4, epochs: 20 }
    }
}

/// Max-margin linear classifier: predicts 1 iff `w . x + b > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper: LinearHyper,
    pub seed: u64,
    /// Objective `lambda/2 |(w, b)|^2 + mean hinge` after each epoch.
    pub loss_trace: Vec<f64>,
    /// Set when training saw a single class and returned a constant rule.
    pub degenerate: bool,
}

impl LinearModel {
    pub fn decision(&self, x: &FeatureVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    pub fn predict(&self, x: &FeatureVector) -> usize {
        (self.decision(x) > 0.0) as usize
    }
}

fn sign(label: usize) -> f64 {
    if label == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Stochastic subgradient descent on `lambda/2 |(w, b)|^2 + mean hinge`
/// with step `1/(lambda t)`. The bias is an extra coordinate with constant
/// input 1, so it shares the regularizer.
pub fn train_linear(t: &impl Examples, hyper: &LinearHyper, seed: u64) -> Result<LinearModel> {
    if t.is_empty() {
        return Err(Error::param("empty training set"));
    }
    if hyper.lambda.is_nan() || hyper.lambda <= 0.0 {
        return Err(Error::param("lambda must be positive"));
    }
    let labels: Vec<usize> = (0..t.len()).map(|i| t.label(i)).collect();
    if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::param(format!("linear model needs binary labels, saw {bad}")));
    }
    let d = t.dim();
    if labels.iter().all(|&l| l == labels[0]) {
        log::warn!("single-class training set; returning a constant classifier");
        return Ok(LinearModel {
            weights: vec![0.0; d],
            bias: sign(labels[0]),
            hyper: hyper.clone(),
            seed,
            loss_trace: Vec::new(),
            degenerate: true,
        });
    }

    // w = scale * v; v[d] is the bias coordinate
    let mut v = vec![0.0; d + 1];
    let mut scale = 1.0;
    let mut step = 0u64;
    let mut order: Vec<usize> = (0..t.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Vec::with_capacity(hyper.epochs);
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            step += 1;
            let x = t.features(i);
            let y = sign(labels[i]);
            let margin = y * scale * (x.dot(&v) + v[d]);
            if step == 1 {
                v.iter_mut().for_each(|w| *w = 0.0);
                scale = 1.0;
            } else {
                scale *= 1.0 - 1.0 / step as f64;
            }
            if margin < 1.0 {
                let g = y / (hyper.lambda * step as f64 * scale);
                for (&j, &xv) in x.indices.iter().zip(&x.values) {
                    v[j as usize] += g * xv;
                }
                v[d] += g;
            }
            if scale < 1e-9 {
                v.iter_mut().for_each(|w| *w *= scale);
                scale = 1.0;
            }
        }
        let norm2: f64 = v.iter().map(|w| w * w).sum::<f64>() * scale * scale;
        let hinge: f64 = (0..t.len())
            .map(|i| {
                let x = t.features(i);
                (1.0 - sign(labels[i]) * scale * (x.dot(&v) + v[d])).max(0.0)
            })
            .sum::<f64>()
            / t.len() as f64;
        trace.push(hyper.lambda / 2.0 * norm2 + hinge);
    }
    Ok(LinearModel {
        weights: v[..d].iter().map(|w| w * scale).collect(),
        bias: v[d] * scale,
        hyper: hyper.clone(),
        seed,
        loss_trace: trace,
        degenerate: false,
    })
}
