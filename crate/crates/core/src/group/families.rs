//! Constructors for the standard families of small groups.

use std::collections::HashMap;

use super::GroupTable;
use crate::error::{Error, Result};

/// Cyclic group `C_n`: `table[i][j] = ((i + j - 2) mod n) + 1`.
pub fn cyclic_group(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidOrder { order: 0, reason: "cyclic group needs n >= 1".into() });
    }
    Ok(GroupTable::from_fn(format!("C{n}"), n, |i, j| (i + j) % n))
}

/// Direct product over lexicographically ordered pairs `(g, h)`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let m = h.order();
    GroupTable::from_fn(format!("{}x{}", g.name(), h.name()), g.order() * m, |x, y| {
        g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
    })
}

/// Dihedral group with `order` elements, `<r, s | r^m = s^2 = 1, srs = r^-1>`.
///
/// Elements are ordered `1, r, .., r^(m-1), s, sr, .., sr^(m-1)`.
pub fn dihedral_group(order: usize) -> Result<GroupTable> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::InvalidOrder { order, reason: "dihedral groups have even order >= 2".into() });
    }
    let m = order / 2;
    Ok(GroupTable::from_fn(format!("D{order}"), order, |x, y| {
        let (sx, a) = (x / m, x % m);
        let (sy, b) = (y / m, y % m);
        match (sx, sy) {
            (0, 0) => (a + b) % m,
            (0, 1) => m + (b + m - a) % m,
            (1, 0) => m + (a + b) % m,
            _ => (b + m - a) % m,
        }
    }))
}

/// Dicyclic group of order `4m`, `<a, b | a^(2m) = 1, b^2 = a^m, b^-1 a b = a^-1>`.
///
/// Elements are `a^k` followed by `a^k b`. Order 8 gives the quaternion group.
pub fn dicyclic_group(order: usize) -> Result<GroupTable> {
    if order == 0 || !order.is_multiple_of(4) {
        return Err(Error::InvalidOrder {
            order,
            reason: "dicyclic groups have order divisible by 4".into(),
        });
    }
    let m = order / 4;
    let k = 2 * m;
    let name = if order == 8 { "Q8".to_string() } else { format!("Dic{order}") };
    Ok(GroupTable::from_fn(name, order, |x, y| {
        let (ex, i) = (x / k, x % k);
        let (ey, j) = (y / k, y % k);
        match (ex, ey) {
            (0, 0) => (i + j) % k,
            (0, 1) => k + (i + j) % k,
            (1, 0) => k + (i + k - j) % k,
            _ => (i + k - j + m) % k,
        }
    }))
}

/// Alternating group on `m` points, `1 <= m <= 6`.
pub fn alternating_group(m: usize) -> Result<GroupTable> {
    if !(1..=6).contains(&m) {
        return Err(Error::UnsupportedOrder {
            order: m,
            reason: "alternating groups are supported for 1 <= m <= 6".into(),
        });
    }
    let perms: Vec<Vec<usize>> = permutations(m).into_iter().filter(|p| is_even(p)).collect();
    Ok(permutation_group_table(format!("A{m}"), perms))
}

/// Symmetric group on `m` points, `1 <= m <= 5`.
pub fn symmetric_group(m: usize) -> Result<GroupTable> {
    if !(1..=5).contains(&m) {
        return Err(Error::UnsupportedOrder {
            order: m,
            reason: "symmetric groups are supported for 1 <= m <= 5".into(),
        });
    }
    Ok(permutation_group_table(format!("S{m}"), permutations(m)))
}

/// All permutations of `0..m` in lexicographic order (identity first).
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// Cayley table of a set of permutations closed under composition, the
/// identity being first. Composition is `(p * q)(x) = p(q(x))`.
fn permutation_group_table(name: String, perms: Vec<Vec<usize>>) -> GroupTable {
    let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    GroupTable::from_fn(name, perms.len(), |a, b| {
        let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index[composed.as_slice()]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(g: &GroupTable) -> Vec<Vec<u32>> {
        g.rows()
    }

    #[test]
    fn cyclic_small_tables() {
        assert_eq!(rows(&cyclic_group(1).unwrap()), vec![vec![1]]);
        assert_eq!(rows(&cyclic_group(2).unwrap()), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(rows(&cyclic_group(3).unwrap()), vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        assert!(matches!(cyclic_group(0), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn klein_from_product() {
        let c2 = cyclic_group(2).unwrap();
        let v = direct_product(&c2, &c2);
        assert_eq!(rows(&v), vec![vec![1, 2, 3, 4], vec![2, 1, 4, 3], vec![3, 4, 1, 2], vec![4, 3, 2, 1]]);
    }

    #[test]
    fn trivial_factor_keeps_table() {
        let g = dihedral_group(8).unwrap();
        let p = direct_product(&cyclic_group(1).unwrap(), &g);
        assert_eq!(p.cells(), g.cells());
    }

    #[test]
    fn dihedral_shapes() {
        assert_eq!(rows(&dihedral_group(2).unwrap()), vec![vec![1, 2], vec![2, 1]]);
        let d8 = dihedral_group(8).unwrap();
        assert!(!d8.is_abelian());
        assert!(matches!(dihedral_group(7), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q8 = dicyclic_group(8).unwrap();
        let involutions = q8.element_orders().iter().filter(|&&o| o == 2).count();
        assert_eq!(involutions, 1);
        assert!(!dicyclic_group(12).unwrap().is_abelian());
        assert!(matches!(dicyclic_group(6), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn alternating_orders() {
        assert_eq!(alternating_group(1).unwrap().order(), 1);
        assert_eq!(alternating_group(4).unwrap().order(), 12);
        assert!(!alternating_group(4).unwrap().is_abelian());
        assert_eq!(alternating_group(5).unwrap().order(), 60);
        assert!(matches!(alternating_group(7), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }
}
