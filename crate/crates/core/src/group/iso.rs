//! Isomorphism testing by backtracking over generator images.

use super::GroupTable;

const UNMAPPED: usize = usize::MAX;

/// Returns a bijection `phi` (as 1-based labels, `phi[x - 1]` is the image
/// of `x`) with `phi(xy) = phi(x) phi(y)`, or `None` if the groups are not
/// isomorphic.
pub fn are_isomorphic(g: &GroupTable, h: &GroupTable) -> Option<Vec<u32>> {
    find_isomorphism(g, h, |_| true).map(|phi| phi.iter().map(|&x| x as u32 + 1).collect())
}

/// Enumerates isomorphisms `g -> h` until `accept` returns true for one of
/// them. The slice handed to `accept` is 0-based.
pub(crate) fn find_isomorphism(
    g: &GroupTable,
    h: &GroupTable,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return None;
    }
    let n = g.order();
    let g_orders = g.element_orders();
    let h_orders = h.element_orders();

    let mut class_size = vec![0usize; n + 1];
    for &o in &h_orders {
        class_size[o] += 1;
    }
    let mut gens = generating_set(g);
    // fail fast: generators with the fewest candidate images first
    gens.sort_by_key(|&x| (class_size[g_orders[x]], x));
    let candidates: Vec<Vec<usize>> =
        gens.iter().map(|&x| (0..n).filter(|&y| h_orders[y] == g_orders[x]).collect()).collect();

    let mut search = Search {
        g,
        h,
        gens: &gens,
        phi: vec![UNMAPPED; n],
        used: vec![false; n],
        domain: Vec::with_capacity(n),
    };
    search.phi[0] = 0;
    search.used[0] = true;
    search.domain.push(0);
    if search.assign(0, &candidates, &mut accept) {
        Some(search.phi)
    } else {
        None
    }
}

struct Search<'a> {
    g: &'a GroupTable,
    h: &'a GroupTable,
    gens: &'a [usize],
    phi: Vec<usize>,
    used: Vec<bool>,
    domain: Vec<usize>,
}

impl Search<'_> {
    fn assign(
        &mut self,
        depth: usize,
        candidates: &[Vec<usize>],
        accept: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == self.gens.len() {
            return self.domain.len() == self.phi.len() && accept(&self.phi);
        }
        let x = self.gens[depth];
        for &y in &candidates[depth] {
            let mark = self.domain.len();
            if self.extend(depth, x, y) && self.assign(depth + 1, candidates, accept) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    /// Maps generator `x` to `y` and closes the partial map under right
    /// multiplication by the generators assigned so far.
    fn extend(&mut self, depth: usize, x: usize, y: usize) -> bool {
        if self.phi[x] != UNMAPPED {
            if self.phi[x] != y {
                return false;
            }
        } else {
            if self.used[y] {
                return false;
            }
            self.set(x, y);
        }
        let active = &self.gens[..=depth];
        let mut cursor = 0;
        while cursor < self.domain.len() {
            let a = self.domain[cursor];
            cursor += 1;
            for &s in active {
                let b = self.g.mul(a, s);
                let img = self.h.mul(self.phi[a], self.phi[s]);
                if self.phi[b] == UNMAPPED {
                    if self.used[img] {
                        return false;
                    }
                    self.set(b, img);
                } else if self.phi[b] != img {
                    return false;
                }
            }
        }
        true
    }

    fn set(&mut self, x: usize, y: usize) {
        self.phi[x] = y;
        self.used[y] = true;
        self.domain.push(x);
    }

    fn undo(&mut self, mark: usize) {
        for x in self.domain.drain(mark..) {
            self.used[self.phi[x]] = false;
            self.phi[x] = UNMAPPED;
        }
    }
}

/// Greedy generating set: repeatedly adds the highest-order element outside
/// the subgroup generated so far.
pub(crate) fn generating_set(g: &GroupTable) -> Vec<usize> {
    let n = g.order();
    let orders = g.element_orders();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut gens = Vec::new();
    while let Some(x) = (0..n).filter(|&x| !inside[x]).max_by_key(|&x| (orders[x], std::cmp::Reverse(x))) {
        gens.push(x);
        inside = super::subgroups::closure(g, &gens);
    }
    gens
}
