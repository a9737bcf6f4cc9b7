//! Brute-force oracles that share no code with the library routes they check.

#![allow(dead_code)]

use algebra_learn::learn::{FeatureVector, Loss, MlpHyper, MlpModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every Latin square of order `n` with symbols `1..=n`, row-major.
pub fn all_latin_squares(n: usize) -> Vec<Vec<u32>> {
    fn fill(n: usize, pos: usize, cells: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == n * n {
            out.push(cells.clone());
            return;
        }
        let (r, c) = (pos / n, pos % n);
        for v in 1..=n as u32 {
            let row_free = (0..c).all(|j| cells[r * n + j] != v);
            let col_free = (0..r).all(|i| cells[i * n + c] != v);
            if row_free && col_free {
                cells[pos] = v;
                fill(n, pos + 1, cells, out);
            }
        }
        cells[pos] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    fill(n, 0, &mut vec![0; n * n], &mut out);
    out
}

/// Group axioms straight from the definition, reading `cells[a][b] = a * b`.
pub fn satisfies_group_axioms(n: usize, cells: &[u32]) -> bool {
    let m = |a: usize, b: usize| cells[a * n + b] as usize - 1;
    let Some(e) = (0..n).find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a)) else {
        return false;
    };
    let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m(m(a, b), c) == m(a, m(b, c)))));
    assoc && (0..n).all(|a| (0..n).any(|b| m(a, b) == e))
}

/// Ring axioms over labels `1..=n`, with the zero found as the additive identity.
pub fn satisfies_ring_axioms(n: usize, mult: &[u32], add: &[u32]) -> bool {
    let p = |a: usize, b: usize| mult[a * n + b] as usize - 1;
    let s = |a: usize, b: usize| add[a * n + b] as usize - 1;
    if !satisfies_group_axioms(n, add) {
        return false;
    }
    (0..n).all(|a| {
        (0..n).all(|b| {
            s(a, b) == s(b, a)
                && (0..n).all(|c| {
                    p(a, s(b, c)) == s(p(a, b), p(a, c))
                        && p(s(a, b), c) == s(p(a, c), p(b, c))
                        && p(p(a, b), c) == p(a, p(b, c))
                })
        })
    })
}

pub fn divisor_count(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

/// Pearson chi-squared statistic of a contingency table.
pub fn chi_squared(table: &[Vec<f64>]) -> f64 {
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..table[0].len()).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let n: f64 = rows.iter().sum();
    let mut chi = 0.0;
    for (i, r) in table.iter().enumerate() {
        for (j, &o) in r.iter().enumerate() {
            let e = rows[i] * cols[j] / n;
            chi += (o - e).powi(2) / e;
        }
    }
    chi
}

/// Small architectures for the gradient check, input size first.
pub const ARCHITECTURES: [&[usize]; 10] = [
    &[3, 2],
    &[4, 3],
    &[5, 4, 2],
    &[6, 8, 3],
    &[2, 3, 3, 2],
    &[7, 5, 4, 4],
    &[10, 16, 2],
    &[8, 4, 4, 4, 3],
    &[12, 6, 5],
    &[9, 32, 8, 2],
];

/// Largest relative error over 100 random coordinates between central
/// differences with a step of 1e-5 and the analytic gradient.
pub fn max_relative_error(sizes: &[usize], loss: Loss, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = MlpModel::init(sizes, MlpHyper::default(), seed).unwrap();
    let x = FeatureVector::dense(&(0..sizes[0]).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
    let label = rng.gen_range(0..*sizes.last().unwrap());
    let analytic = model.gradient(&x, label, loss).unwrap();
    assert_eq!(analytic.len(), model.param_count());
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let i = rng.gen_range(0..model.param_count());
        let p = model.param(i);
        model.set_param(i, p + h);
        let up = model.loss(&x, label, loss).unwrap();
        model.set_param(i, p - h);
        let down = model.loss(&x, label, loss).unwrap();
        model.set_param(i, p);
        let numeric = (up - down) / (2.0 * h);
        let scale = analytic[i].abs().max(numeric.abs()).max(1e-7);
        worst = worst.max((analytic[i] - numeric).abs() / scale);
    }
    worst
}
