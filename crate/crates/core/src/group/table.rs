use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cayley table of a finite group with elements labelled `1..=n`.
///
/// Element `1` is the identity and the table is stored in reduced form: the
/// first row and the first column both read `1, 2, .., n`. Construction
/// through [`GroupTable::new`] checks the Latin property, the reduced form
/// and associativity on every triple.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    name: String,
    n: usize,
    cells: Vec<u32>,
}

impl GroupTable {
    /// Validates a row-major table of 1-based labels.
    pub fn new(name: impl Into<String>, n: usize, cells: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder { order: 0, reason: "a group has at least one element".into() });
        }
        if cells.len() != n * n {
            return Err(Error::shape(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                cells.len()
            )));
        }
        let table = GroupTable { name: name.into(), n, cells };
        table.validate()?;
        Ok(table)
    }

    /// Builds a table from a 0-based multiplication closure, relabelling to
    /// 1-based labels. Element 0 must be the identity.
    pub(crate) fn from_fn(name: impl Into<String>, n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(mul(i, j) as u32 + 1);
            }
        }
        let table = GroupTable { name: name.into(), n, cells };
        debug_assert!(table.validate().is_ok(), "constructor produced invalid table");
        table
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if let Some(&bad) = self.cells.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(Error::NotLatin(format!("entry {bad} outside 1..={n}")));
        }
        if !crate::group::is_latin_cells(n, &self.cells) {
            return Err(Error::NotLatin("some row or column repeats a symbol".into()));
        }
        for j in 0..n {
            if self.cells[j] as usize != j + 1 || self.cells[j * n] as usize != j + 1 {
                return Err(Error::NotGroup(
                    "first row and column must be 1..n (element 1 is the identity)".into(),
                ));
            }
        }
        if let Some((a, b, c)) = self.first_nonassociative_triple() {
            return Err(Error::NotGroup(format!(
                "associativity fails for ({}, {}, {})",
                a + 1,
                b + 1,
                c + 1
            )));
        }
        Ok(())
    }

    pub(crate) fn first_nonassociative_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Row-major 1-based labels.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Product of 0-based elements, returned 0-based.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b] as usize - 1
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.mul(a, b) == 0).expect("Latin rows contain the identity")
    }

    /// Order of a 0-based element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.n).map(|a| self.element_order(a)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders, an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut orders = self.element_orders();
        orders.sort_unstable();
        orders
    }
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("name", &self.name).field("n", &self.n).finish()
    }
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (order {})", self.name, self.n)?;
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// A subgroup, given by its sorted 1-based element labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, label: u32) -> bool {
        self.elements.binary_search(&label).is_ok()
    }

    /// Checks closure under the parent multiplication and presence of the identity.
    pub fn is_closed_in(&self, g: &GroupTable) -> bool {
        if !self.contains(1) {
            return false;
        }
        self.elements.iter().all(|&a| {
            self.elements.iter().all(|&b| self.contains(g.mul(a as usize - 1, b as usize - 1) as u32 + 1))
        })
    }

    /// The subgroup's own Cayley table, relabelled so its identity is 1.
    pub fn induced_table(&self, g: &GroupTable) -> GroupTable {
        let index: Vec<usize> = self.elements.iter().map(|&e| e as usize - 1).collect();
        let pos = |e: usize| index.binary_search(&e).expect("closed subgroup");
        GroupTable::from_fn(format!("sub({})", g.name()), index.len(), |i, j| pos(g.mul(index[i], index[j])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length() {
        assert!(matches!(GroupTable::new("x", 2, vec![1, 2, 2]), Err(Error::Shape(_))));
    }

    #[test]
    fn rejects_non_reduced() {
        let err = GroupTable::new("x", 2, vec![2, 1, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::NotGroup(_)));
    }

    #[test]
    fn accepts_klein() {
        let g = GroupTable::new("V4", 4, vec![1, 2, 3, 4, 2, 1, 4, 3, 3, 4, 1, 2, 4, 3, 2, 1]).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.order_profile(), vec![1, 2, 2, 2]);
        assert_eq!(g.inverse(2), 2);
    }
}
