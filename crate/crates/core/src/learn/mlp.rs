use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Examples, FeatureVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Loss {
    /// Squared error between the one-hot target and the softmax output.
    Mse,
    CrossEntropy,
}

/// Update rule applied to each mini-batch gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    /// Heavy-ball momentum with coefficient `momentum`.
    #[default]
    Momentum,
    /// Adam with the usual moment decays 0.9 and 0.999.
    Adam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct MlpHyper {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub loss: Loss,
    pub optimizer: Optimizer,
}

impl Default for MlpHyper {
    fn default() -> Self {
        MlpHyper {
            hidden: vec![32],
            epochs: 30,
            batch_size: 32,
            learning_rate: 0.5,
            momentum: 0.9,
            loss: Loss::Mse,
            optimizer: Optimizer::Momentum,
        }
    }
}

/// Fully connected network: sigmoid hidden layers, softmax output.
///
/// `weights[l]` is `sizes[l] x sizes[l + 1]`, row-major by input unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub sizes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub hyper: MlpHyper,
    pub seed: u64,
    /// Mean training loss during each epoch.
    pub loss_trace: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub(crate) fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Index of the largest entry; ties go to the lower index.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

impl MlpModel {
    /// Weights and biases uniform in `+-1/sqrt(fan_in)`.
    pub fn init(sizes: &[usize], hyper: MlpHyper, seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::param(format!("bad layer sizes {sizes:?}")));
        }
        let params: usize = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        if params > MAX_PARAMS {
            return Err(Error::ResourceLimit(format!(
                "layer sizes {sizes:?} need {params} parameters, above {MAX_PARAMS}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in sizes.windows(2) {
            let r = 1.0 / (w[0] as f64).sqrt();
            weights.push((0..w[0] * w[1]).map(|_| rng.gen_range(-r..r)).collect());
            biases.push((0..w[1]).map(|_| rng.gen_range(-r..r)).collect());
        }
        Ok(MlpModel { sizes: sizes.to_vec(), weights, biases, hyper, seed, loss_trace: Vec::new() })
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn classes(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// Activations of every layer after the input; the last is the softmax.
    fn activations(&self, x: &FeatureVector) -> Vec<Vec<f64>> {
        let layers = self.weights.len();
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(layers);
        for l in 0..layers {
            let out = self.sizes[l + 1];
            let w = &self.weights[l];
            let mut z = self.biases[l].clone();
            if l == 0 {
                for (&i, &v) in x.indices.iter().zip(&x.values) {
                    let row = &w[i as usize * out..(i as usize + 1) * out];
                    z.iter_mut().zip(row).for_each(|(zo, wo)| *zo += v * wo);
                }
            } else {
                for (i, &a) in acts[l - 1].iter().enumerate() {
                    let row = &w[i * out..(i + 1) * out];
                    z.iter_mut().zip(row).for_each(|(zo, wo)| *zo += a * wo);
                }
            }
            if l + 1 == layers {
                acts.push(softmax(&z));
            } else {
                acts.push(z.into_iter().map(sigmoid).collect());
            }
        }
        acts
    }

    fn check_dim(&self, x: &FeatureVector) -> Result<()> {
        if x.dim != self.input_dim() {
            return Err(Error::shape(format!(
                "feature length {} for a model with input {}",
                x.dim,
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Class probabilities.
    pub fn forward(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.activations(x).pop().unwrap())
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<usize> {
        Ok(argmax(&self.forward(x)?))
    }

    /// Loss of one example under `loss`.
    pub fn loss(&self, x: &FeatureVector, label: usize, loss: Loss) -> Result<f64> {
        let p = self.forward(x)?;
        Ok(loss_value(&p, label, loss))
    }

    pub fn param_count(&self) -> usize {
        self.weights.iter().chain(&self.biases).map(Vec::len).sum()
    }

    fn param_slot(&self, mut i: usize) -> (bool, usize, usize) {
        for (l, w) in self.weights.iter().enumerate() {
            if i < w.len() {
                return (true, l, i);
            }
            i -= w.len();
        }
        for (l, b) in self.biases.iter().enumerate() {
            if i < b.len() {
                return (false, l, i);
            }
            i -= b.len();
        }
        panic!("parameter index out of range");
    }

    /// Flat parameter `i`: all weight matrices in layer order, then all biases.
    pub fn param(&self, i: usize) -> f64 {
        match self.param_slot(i) {
            (true, l, k) => self.weights[l][k],
            (false, l, k) => self.biases[l][k],
        }
    }

    pub fn set_param(&mut self, i: usize, v: f64) {
        match self.param_slot(i) {
            (true, l, k) => self.weights[l][k] = v,
            (false, l, k) => self.biases[l][k] = v,
        }
    }

    /// Analytic gradient of [`MlpModel::loss`] in the flat parameter order.
    pub fn gradient(&self, x: &FeatureVector, label: usize, loss: Loss) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut g = Grads::zeros(self);
        self.backprop(x, label, loss, &mut g);
        let mut flat: Vec<f64> = g.w.into_iter().flatten().collect();
        flat.extend(g.b.into_iter().flatten());
        Ok(flat)
    }

    /// Adds the gradient of one example into `g`; returns its loss.
    fn backprop(&self, x: &FeatureVector, label: usize, loss: Loss, g: &mut Grads) -> f64 {
        let acts = self.activations(x);
        let layers = self.weights.len();
        let p = &acts[layers - 1];
        let mut delta: Vec<f64> = match loss {
            Loss::CrossEntropy => {
                p.iter().enumerate().map(|(k, &pk)| pk - (k == label) as usize as f64).collect()
            }
            Loss::Mse => {
                let dp: Vec<f64> =
                    p.iter().enumerate().map(|(k, &pk)| 2.0 * (pk - (k == label) as usize as f64)).collect();
                let s: f64 = p.iter().zip(&dp).map(|(a, b)| a * b).sum();
                p.iter().zip(&dp).map(|(pk, dk)| pk * (dk - s)).collect()
            }
        };
        for l in (0..layers).rev() {
            let out = self.sizes[l + 1];
            g.b[l].iter_mut().zip(&delta).for_each(|(gb, d)| *gb += d);
            if l == 0 {
                for (&i, &v) in x.indices.iter().zip(&x.values) {
                    let i = i as usize;
                    if !g.touched[i] {
                        g.touched[i] = true;
                        g.rows.push(i);
                    }
                    let row = &mut g.w[0][i * out..(i + 1) * out];
                    row.iter_mut().zip(&delta).for_each(|(gw, d)| *gw += v * d);
                }
            } else {
                let a = &acts[l - 1];
                let w = &self.weights[l];
                let mut next = vec![0.0; self.sizes[l]];
                for (i, &ai) in a.iter().enumerate() {
                    let row = &mut g.w[l][i * out..(i + 1) * out];
                    let wrow = &w[i * out..(i + 1) * out];
                    let mut back = 0.0;
                    for o in 0..out {
                        row[o] += ai * delta[o];
                        back += wrow[o] * delta[o];
                    }
                    next[i] = back * ai * (1.0 - ai);
                }
                delta = next;
            }
        }
        loss_value(p, label, loss)
    }
}

fn loss_value(p: &[f64], label: usize, loss: Loss) -> f64 {
    match loss {
        Loss::Mse => p.iter().enumerate().map(|(k, &pk)| (pk - (k == label) as usize as f64).powi(2)).sum(),
        Loss::CrossEntropy => -p[label].max(1e-300).ln(),
    }
}

/// Gradient buffers; the first layer tracks which input rows were written.
struct Grads {
    w: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    touched: Vec<bool>,
    rows: Vec<usize>,
}

impl Grads {
    fn zeros(m: &MlpModel) -> Self {
        Grads {
            w: m.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            b: m.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
            touched: vec![false; m.sizes[0]],
            rows: Vec::new(),
        }
    }

    fn clear(&mut self, first_out: usize) {
        for &i in &self.rows {
            self.w[0][i * first_out..(i + 1) * first_out].fill(0.0);
            self.touched[i] = false;
        }
        self.rows.clear();
        self.w[1..].iter_mut().for_each(|w| w.fill(0.0));
        self.b.iter_mut().for_each(|b| b.fill(0.0));
    }
}

/// Mini-batch gradient descent with momentum on the mean per-example loss.
/// Parameter ceiling; training keeps about four copies of every parameter.
pub const MAX_PARAMS: usize = 1 << 25;

pub fn train_mlp(t: &impl Examples, hyper: &MlpHyper, seed: u64) -> Result<MlpModel> {
    if t.is_empty() {
        return Err(Error::param("empty training set"));
    }
    if t.classes() < 2 {
        return Err(Error::param("an MLP needs at least two classes"));
    }
    if hyper.hidden.is_empty() || hyper.hidden.contains(&0) || hyper.batch_size == 0 {
        return Err(Error::param("hidden sizes and batch size must be >= 1"));
    }
    let mut sizes = vec![t.dim()];
    sizes.extend(&hyper.hidden);
    sizes.push(t.classes());
    let mut model = MlpModel::init(&sizes, hyper.clone(), seed)?;
    if let Some(i) = (0..t.len()).find(|&i| t.label(i) >= t.classes()) {
        return Err(Error::param(format!("label {} out of range", t.label(i))));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_ba7c);
    let mut order: Vec<usize> = (0..t.len()).collect();
    let mut grads = Grads::zeros(&model);
    let mut state_w: Vec<Moments> = model.weights.iter().map(|w| Moments::new(w.len())).collect();
    let mut state_b: Vec<Moments> = model.biases.iter().map(|b| Moments::new(b.len())).collect();
    let first_out = sizes[1];
    let mut updates = 0i32;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(hyper.batch_size) {
            grads.clear(first_out);
            for &i in batch {
                let x = t.features(i);
                if x.dim != model.input_dim() {
                    return Err(Error::shape(format!(
                        "feature length {} for input layer {}",
                        x.dim,
                        model.input_dim()
                    )));
                }
                total += model.backprop(&x, t.label(i), hyper.loss, &mut grads);
            }
            updates += 1;
            let scale = 1.0 / batch.len() as f64;
            for l in 0..model.weights.len() {
                state_w[l].step(&mut model.weights[l], &grads.w[l], scale, hyper, updates);
                state_b[l].step(&mut model.biases[l], &grads.b[l], scale, hyper, updates);
            }
        }
        model.loss_trace.push(total / t.len() as f64);
    }
    Ok(model)
}

/// Optimizer state for one parameter block: velocity for momentum, first
/// and second moments for Adam.
struct Moments {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Moments { m: vec![0.0; len], v: vec![0.0; len] }
    }

    /// `grad * scale` is the mean gradient of the batch; `t` counts updates from 1.
    fn step(&mut self, param: &mut [f64], grad: &[f64], scale: f64, h: &MlpHyper, t: i32) {
        let rate = h.learning_rate;
        match h.optimizer {
            Optimizer::Momentum => {
                for ((p, v), g) in param.iter_mut().zip(&mut self.m).zip(grad) {
                    *v = h.momentum * *v - rate * scale * g;
                    *p += *v;
                }
            }
            Optimizer::Adam => {
                const B1: f64 = 0.9;
                const B2: f64 = 0.999;
                let c1 = 1.0 - B1.powi(t);
                let c2 = 1.0 - B2.powi(t);
                for (((p, m), v), g) in param.iter_mut().zip(&mut self.m).zip(&mut self.v).zip(grad) {
                    let g = g * scale;
                    *m = B1 * *m + (1.0 - B1) * g;
                    *v = B2 * *v + (1.0 - B2) * g * g;
                    *p -= rate * (*m / c1) / ((*v / c2).sqrt() + 1e-8);
                }
            }
        }
    }
}
