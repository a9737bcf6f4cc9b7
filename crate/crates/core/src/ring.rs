//! Finite commutative rings `Z/n1 x .. x Z/nk` as paired multiplication and
//! addition tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{find_isomorphism, is_latin_cells, GroupTable};
use crate::latin::permute_cells;

/// Largest ring size accepted by [`cyclic_product_ring`].
pub const DEFAULT_RING_LIMIT: usize = 256;

/// Multiplication and addition tables of a product of cyclic rings. Element
/// tuples are enumerated lexicographically and labelled from 1, so the zero
/// tuple is label 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTables {
    pub n: usize,
    pub moduli: Vec<usize>,
    pub mult: Vec<u32>,
    pub add: Vec<u32>,
}

/// Builds the tables of `Z/m1 x .. x Z/mk` (size at most [`DEFAULT_RING_LIMIT`]).
pub fn cyclic_product_ring(moduli: &[usize]) -> Result<RingTables> {
    cyclic_product_ring_with_limit(moduli, DEFAULT_RING_LIMIT)
}

pub fn cyclic_product_ring_with_limit(moduli: &[usize], limit: usize) -> Result<RingTables> {
    if moduli.is_empty() || moduli.contains(&0) {
        return Err(Error::param(format!("moduli must be a nonempty list of integers >= 1, got {moduli:?}")));
    }
    let n = moduli
        .iter()
        .try_fold(1usize, |acc, &m| acc.checked_mul(m).filter(|&p| p <= limit))
        .ok_or_else(|| Error::ResourceLimit(format!("ring {moduli:?} exceeds the size limit {limit}")))?;

    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; moduli.len()];
        for (k, &m) in moduli.iter().enumerate().rev() {
            d[k] = x % m;
            x /= m;
        }
        d
    };
    let label = |d: &[usize]| d.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m + x);
    let tuples: Vec<Vec<usize>> = (0..n).map(digits).collect();

    let mut mult = Vec::with_capacity(n * n);
    let mut add = Vec::with_capacity(n * n);
    for a in &tuples {
        for b in &tuples {
            let prod: Vec<usize> = a.iter().zip(b).zip(moduli).map(|((x, y), m)| x * y % m).collect();
            let sum: Vec<usize> = a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
            mult.push(label(&prod) as u32 + 1);
            add.push(label(&sum) as u32 + 1);
        }
    }
    Ok(RingTables { n, moduli: moduli.to_vec(), mult, add })
}

/// Ring `Z/p1 x .. x Z/pk` from the prime factorization of `j`, factors ascending.
pub fn ring_of_size(j: usize) -> Result<RingTables> {
    if j < 2 {
        return Err(Error::param("ring_of_size needs j >= 2"));
    }
    cyclic_product_ring(&prime_factors(j))
}

pub(crate) fn prime_factors(mut j: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= j {
        while j.is_multiple_of(p) {
            out.push(p);
            j /= p;
        }
        p += 1;
    }
    if j > 1 {
        out.push(j);
    }
    out
}

impl RingTables {
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b] as usize - 1
    }

    #[inline]
    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize - 1
    }

    pub fn name(&self) -> String {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z{m}")).collect();
        parts.join("x")
    }

    /// The additive group as a Cayley table.
    pub fn additive_group(&self) -> GroupTable {
        GroupTable::new(format!("({}, +)", self.name()), self.n, self.add.clone())
            .expect("addition table of a cyclic product is a group table")
    }

    /// First triple violating `a(b + c) = ab + ac` or `(a + b)c = ac + bc`.
    pub fn first_distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        ring_axiom_violation(self.n, &|a, b| self.mul(a, b), &|a, b| self.sum(a, b))
    }

    /// Applies the same row and column permutations to both tables
    /// (0-based positions): `T'[i][j] = T[row_perm[i]][col_perm[j]]`.
    pub fn paired_permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<(Vec<u32>, Vec<u32>)> {
        Ok((
            permute_cells(self.n, &self.mult, row_perm, col_perm)?,
            permute_cells(self.n, &self.add, row_perm, col_perm)?,
        ))
    }
}

/// Checks ring axioms of 0-based operations: additive associativity and
/// commutativity, multiplicative associativity, and both distributive laws.
fn ring_axiom_violation(
    n: usize,
    mul: &dyn Fn(usize, usize) -> usize,
    add: &dyn Fn(usize, usize) -> usize,
) -> Option<(usize, usize, usize)> {
    for a in 0..n {
        for b in 0..n {
            if add(a, b) != add(b, a) {
                return Some((a, b, b));
            }
            for c in 0..n {
                let left = mul(a, add(b, c)) == add(mul(a, b), mul(a, c));
                let right = mul(add(a, b), c) == add(mul(a, c), mul(b, c));
                let assoc = add(add(a, b), c) == add(a, add(b, c)) && mul(mul(a, b), c) == mul(a, mul(b, c));
                if !(left && right && assoc) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Distributivity scan of a (possibly row/column permuted) table pair.
///
/// Rows and columns are relabelled through the addition table: the zero row
/// `i0` and zero column `j0` are those where the product table is constantly
/// 1 and `add[i0][j0] = 1`; row `i` then stands for element `add[i][j0]` and
/// column `j` for `add[i0][j]`. The pair passes iff for some such choice the
/// relabelled operations satisfy the ring axioms on every triple.
pub fn is_ring_pair(n: usize, mult: &[u32], add: &[u32]) -> bool {
    if mult.len() != n * n || add.len() != n * n || !is_latin_cells(n, add) {
        return false;
    }
    if mult.iter().any(|&v| v == 0 || v as usize > n) {
        return false;
    }
    let zero_rows: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| mult[i * n + j] == 1)).collect();
    let zero_cols: Vec<usize> = (0..n).filter(|&j| (0..n).all(|i| mult[i * n + j] == 1)).collect();
    for &i0 in &zero_rows {
        for &j0 in &zero_cols {
            if add[i0 * n + j0] != 1 {
                continue;
            }
            let row_elem: Vec<usize> = (0..n).map(|i| add[i * n + j0] as usize - 1).collect();
            let col_elem: Vec<usize> = (0..n).map(|j| add[i0 * n + j] as usize - 1).collect();
            let mut m = vec![0usize; n * n];
            let mut s = vec![0usize; n * n];
            for i in 0..n {
                for j in 0..n {
                    let k = row_elem[i] * n + col_elem[j];
                    m[k] = mult[i * n + j] as usize - 1;
                    s[k] = add[i * n + j] as usize - 1;
                }
            }
            if ring_axiom_violation(n, &|a, b| m[a * n + b], &|a, b| s[a * n + b]).is_none() {
                return true;
            }
        }
    }
    false
}

/// A bijection preserving both tables, as 1-based labels, or `None`.
pub fn ring_isomorphism(r: &RingTables, s: &RingTables) -> Option<Vec<u32>> {
    if r.n != s.n {
        return None;
    }
    let (gr, gs) = (r.additive_group(), s.additive_group());
    find_isomorphism(&gr, &gs, |phi| {
        (0..r.n).all(|a| (0..r.n).all(|b| phi[r.mul(a, b)] == s.mul(phi[a], phi[b])))
    })
    .map(|phi| phi.into_iter().map(|x| x as u32 + 1).collect())
}

/// Integer partitions of `total` in reverse lexicographic order.
pub fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max_part)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(total, total, &mut Vec::new(), &mut out);
    }
    out
}

/// The ring `prod Z/2^(n_i)` for a partition `(n_1, .., n_k)`.
pub fn two_power_ring(partition: &[usize]) -> Result<RingTables> {
    let moduli: Vec<usize> = partition.iter().map(|&p| 1usize << p).collect();
    cyclic_product_ring(&moduli)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_times_z3_tables() {
        let r = cyclic_product_ring(&[2, 3]).unwrap();
        let mult: Vec<u32> = vec![
            1, 1, 1, 1, 1, 1, //
            1, 2, 3, 1, 2, 3, //
            1, 3, 2, 1, 3, 2, //
            1, 1, 1, 4, 4, 4, //
            1, 2, 3, 4, 5, 6, //
            1, 3, 2, 4, 6, 5,
        ];
        let add: Vec<u32> = vec![
            1, 2, 3, 4, 5, 6, //
            2, 3, 1, 5, 6, 4, //
            3, 1, 2, 6, 4, 5, //
            4, 5, 6, 1, 2, 3, //
            5, 6, 4, 2, 3, 1, //
            6, 4, 5, 3, 1, 2,
        ];
        assert_eq!(r.mult, mult);
        assert_eq!(r.add, add);
        assert!(r.first_distributivity_violation().is_none());
    }

    #[test]
    fn trivial_ring() {
        let r = cyclic_product_ring(&[1]).unwrap();
        assert_eq!(r.mult, vec![1]);
        assert_eq!(r.add, vec![1]);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(cyclic_product_ring(&[16, 17]), Err(Error::ResourceLimit(_))));
        assert!(cyclic_product_ring(&[]).is_err());
    }

    #[test]
    fn crt_isomorphism() {
        let a = cyclic_product_ring(&[6]).unwrap();
        let b = cyclic_product_ring(&[2, 3]).unwrap();
        assert!(ring_isomorphism(&a, &b).is_some());
        let c = cyclic_product_ring(&[4]).unwrap();
        let d = cyclic_product_ring(&[2, 2]).unwrap();
        assert!(ring_isomorphism(&c, &d).is_none());
    }

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(6).len(), 11);
    }

    #[test]
    fn factorization_rings() {
        assert_eq!(ring_of_size(12).unwrap().moduli, vec![2, 2, 3]);
        assert_eq!(ring_of_size(9).unwrap().moduli, vec![3, 3]);
    }

    #[test]
    fn paired_identity_is_noop() {
        let r = cyclic_product_ring(&[2, 3]).unwrap();
        let id: Vec<usize> = (0..6).collect();
        let (m, a) = r.paired_permute(&id, &id).unwrap();
        assert_eq!((m, a), (r.mult.clone(), r.add.clone()));
        assert!(is_ring_pair(6, &r.mult, &r.add));
    }
}
