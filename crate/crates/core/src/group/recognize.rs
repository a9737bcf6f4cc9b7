//! Deciding whether a Latin square is (a row/column relabelling of) a Cayley table.

use crate::error::{Error, Result};
use crate::latin::LatinSquare;

/// True iff every row and column of the row-major `n x n` block is a
/// permutation of `1..=n`.
pub(crate) fn is_latin_cells(n: usize, cells: &[u32]) -> bool {
    if cells.len() != n * n {
        return false;
    }
    let mut seen = vec![0usize; n + 1];
    let mut stamp = 0;
    for line in 0..2 * n {
        stamp += 1;
        for t in 0..n {
            let v = if line < n { cells[line * n + t] } else { cells[t * n + (line - n)] } as usize;
            if v == 0 || v > n || seen[v] == stamp {
                return false;
            }
            seen[v] = stamp;
        }
    }
    true
}

/// Checks the Latin property of a square integer array.
pub fn is_latin_square(rows: &[Vec<u32>]) -> Result<bool> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::shape(format!("row of length {} in a {n}-row array", r.len())));
    }
    let cells: Vec<u32> = rows.iter().flatten().copied().collect();
    Ok(is_latin_cells(n, &cells))
}

/// Quadrangle criterion: whenever `a[i][k] = a[i'][k']`, `a[i][l] = a[i'][l']`
/// and `a[j][k] = a[j'][k']`, also `a[j][l] = a[j'][l']`.
///
/// In a Latin square the primed indices `k'`, `l'`, `j'` are determined by
/// the unprimed ones, so the scan visits `n^5` index tuples instead of `n^8`.
pub fn quadrangle_criterion(square: &LatinSquare) -> bool {
    let n = square.order();
    let a = |r: usize, c: usize| square.get(r, c) as usize - 1;
    // col_of[r][s]: column of symbol s in row r; row_of[c][s]: row of s in column c
    let mut col_of = vec![0usize; n * n];
    let mut row_of = vec![0usize; n * n];
    for r in 0..n {
        for c in 0..n {
            let s = a(r, c);
            col_of[r * n + s] = c;
            row_of[c * n + s] = r;
        }
    }
    for i in 0..n {
        for k in 0..n {
            let s = a(i, k);
            for ip in 0..n {
                let kp = col_of[ip * n + s];
                for l in 0..n {
                    let lp = col_of[ip * n + a(i, l)];
                    for j in 0..n {
                        let jp = row_of[kp * n + a(j, k)];
                        if a(j, l) != a(jp, lp) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// True iff the quasigroup of `square` is isotopic to a group.
///
/// Builds the principal loop isotope `x . y = L[v^-1(x)][u^-1(y)]`, where `u`
/// is the first row and `v` the first column, and tests it for associativity
/// on all triples.
pub fn is_group_table(square: &LatinSquare) -> bool {
    let loop_op = principal_loop(square);
    let n = square.order();
    let op = |x: usize, y: usize| loop_op[x * n + y];
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| op(op(x, y), z) == op(x, op(y, z)))))
}

/// 0-based operation table of the principal loop isotope.
pub(crate) fn principal_loop(square: &LatinSquare) -> Vec<usize> {
    let n = square.order();
    let a = |r: usize, c: usize| square.get(r, c) as usize - 1;
    let mut col_with = vec![0usize; n];
    let mut row_with = vec![0usize; n];
    for t in 0..n {
        col_with[a(0, t)] = t;
        row_with[a(t, 0)] = t;
    }
    let mut op = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            op[x * n + y] = a(row_with[x], col_with[y]);
        }
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic_group;

    #[test]
    fn latin_checks() {
        let c4 = cyclic_group(4).unwrap();
        assert!(is_latin_square(&c4.rows()).unwrap());
        assert!(!is_latin_square(&[vec![1, 1], vec![2, 2]]).unwrap());
        assert!(!is_latin_square(&[vec![0]]).unwrap());
        assert!(is_latin_square(&[]).unwrap());
        assert!(matches!(is_latin_square(&[vec![1, 2], vec![2]]), Err(Error::Shape(_))));
    }

    #[test]
    fn cyclic_passes_both_tests() {
        let sq = LatinSquare::from(&cyclic_group(4).unwrap());
        assert!(quadrangle_criterion(&sq));
        assert!(is_group_table(&sq));
    }
}
