//! Latin squares: validation, row/column permutation, reduction and random
//! generation with the Jacobson-Matthews Markov chain.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{is_latin_cells, GroupTable};

/// An `n x n` array over `1..=n` whose rows and columns are permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::shape(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                cells.len()
            )));
        }
        if !is_latin_cells(n, &cells) {
            return Err(Error::NotLatin(format!("order-{n} array is not Latin")));
        }
        Ok(LatinSquare { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::shape("rows of unequal length"));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    /// The cyclic square `L[r][c] = ((r + c) mod n) + 1`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n).flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u32 + 1)).collect();
        LatinSquare { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.n + c]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// `square'[i][j] = square[row_perm[i]][col_perm[j]]` with 0-based
    /// positions. The Latin property is preserved.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<LatinSquare> {
        let cells = permute_cells(self.n, &self.cells, row_perm, col_perm)?;
        Ok(LatinSquare { n: self.n, cells })
    }

    /// The unique row/column permutation with first row and first column
    /// in ascending order.
    pub fn reduce(&self) -> LatinSquare {
        let n = self.n;
        let mut col_perm = vec![0usize; n];
        for c in 0..n {
            col_perm[self.get(0, c) as usize - 1] = c;
        }
        let mut row_perm = vec![0usize; n];
        for r in 0..n {
            row_perm[self.get(r, col_perm[0]) as usize - 1] = r;
        }
        self.permute(&row_perm, &col_perm).expect("derived permutations are valid")
    }

    pub fn is_reduced(&self) -> bool {
        (0..self.n).all(|t| self.get(0, t) as usize == t + 1 && self.get(t, 0) as usize == t + 1)
    }
}

impl From<&GroupTable> for LatinSquare {
    fn from(g: &GroupTable) -> Self {
        LatinSquare { n: g.order(), cells: g.cells().to_vec() }
    }
}

/// Checks that `perm` is a permutation of `0..n`.
pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::shape(format!("permutation of length {} for order {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::param(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

pub(crate) fn permute_cells(
    n: usize,
    cells: &[u32],
    row_perm: &[usize],
    col_perm: &[usize],
) -> Result<Vec<u32>> {
    check_permutation(row_perm, n)?;
    check_permutation(col_perm, n)?;
    let mut out = Vec::with_capacity(n * n);
    for &r in row_perm {
        for &c in col_perm {
            out.push(cells[r * n + c]);
        }
    }
    Ok(out)
}

/// Uniformly random permutation of `0..n`.
pub(crate) fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Jacobson-Matthews chain over the incidence cube of an order-`n` square.
///
/// The state is a cube `cube[r][c][s]` with entries in `{-1, 0, 1}`; it is
/// proper (a Latin square) when every entry is 0 or 1, and improper when
/// exactly one entry is -1.
pub struct LatinSampler {
    n: usize,
    cube: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
    rng: ChaCha8Rng,
    thinning: usize,
    started: bool,
    burn_in: usize,
}

impl LatinSampler {
    /// A chain starting from the cyclic square with burn-in `n^3` proper
    /// moves and thinning `n^2` proper moves between samples.
    pub fn new(n: usize, seed: u64) -> Self {
        let mut cube = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                cube[(r * n + c) * n + (r + c) % n] = 1;
            }
        }
        LatinSampler {
            n,
            cube,
            improper: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            thinning: n * n,
            started: false,
            burn_in: n * n * n,
        }
    }

    pub fn with_burn_in(mut self, moves: usize) -> Self {
        self.burn_in = moves;
        self
    }

    pub fn with_thinning(mut self, moves: usize) -> Self {
        self.thinning = moves;
        self
    }

    #[inline]
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    /// Indices `t` along one line of the cube where the entry is 1.
    fn ones_on_line(&self, f: impl Fn(usize) -> usize) -> [usize; 2] {
        let mut found = [usize::MAX; 2];
        let mut k = 0;
        for t in 0..self.n {
            if self.cube[f(t)] == 1 {
                found[k] = t;
                k += 1;
                if k == 2 {
                    break;
                }
            }
        }
        found
    }

    fn step(&mut self) {
        let n = self.n;
        let (r, c, s, r1, c1, s1);
        match self.improper {
            None => {
                loop {
                    let (a, b, d) =
                        (self.rng.gen_range(0..n), self.rng.gen_range(0..n), self.rng.gen_range(0..n));
                    if self.cube[self.idx(a, b, d)] == 0 {
                        (r, c, s) = (a, b, d);
                        break;
                    }
                }
                r1 = self.ones_on_line(|t| self.idx(t, c, s))[0];
                c1 = self.ones_on_line(|t| self.idx(r, t, s))[0];
                s1 = self.ones_on_line(|t| self.idx(r, c, t))[0];
            }
            Some((a, b, d)) => {
                (r, c, s) = (a, b, d);
                let rows = self.ones_on_line(|t| self.idx(t, c, s));
                let cols = self.ones_on_line(|t| self.idx(r, t, s));
                let syms = self.ones_on_line(|t| self.idx(r, c, t));
                r1 = rows[self.rng.gen_range(0..2)];
                c1 = cols[self.rng.gen_range(0..2)];
                s1 = syms[self.rng.gen_range(0..2)];
            }
        }
        for (a, b, d) in [(r, c, s), (r, c1, s1), (r1, c, s1), (r1, c1, s)] {
            let i = self.idx(a, b, d);
            self.cube[i] += 1;
        }
        for (a, b, d) in [(r, c1, s), (r1, c, s), (r, c, s1), (r1, c1, s1)] {
            let i = self.idx(a, b, d);
            self.cube[i] -= 1;
        }
        self.improper = if self.cube[self.idx(r1, c1, s1)] < 0 { Some((r1, c1, s1)) } else { None };
    }

    /// Runs until `moves` proper states have been reached.
    pub fn advance(&mut self, moves: usize) {
        if self.n < 2 {
            return;
        }
        let mut done = 0;
        while done < moves || self.improper.is_some() {
            self.step();
            if self.improper.is_none() {
                done += 1;
            }
        }
    }

    /// Current square; the chain is always proper between calls.
    pub fn current(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = (0..n).find(|&s| self.cube[self.idx(r, c, s)] == 1).unwrap();
                cells[r * n + c] = s as u32 + 1;
            }
        }
        LatinSquare { n, cells }
    }

    /// Next sample: burn-in before the first, thinning before the rest.
    pub fn sample(&mut self) -> LatinSquare {
        let moves = if self.started {
            self.thinning
        } else {
            self.started = true;
            self.burn_in
        };
        self.advance(moves);
        self.current()
    }
}

/// A Latin square drawn by the Jacobson-Matthews chain from the cyclic
/// square after `n^3` proper moves. Deterministic in `(n, seed)`.
pub fn random_latin_square(n: usize, seed: u64) -> LatinSquare {
    LatinSampler::new(n, seed).sample()
}
