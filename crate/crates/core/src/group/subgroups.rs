//! Subgroup enumeration, normality and simplicity.

use std::collections::HashSet;

use super::iso::find_isomorphism;
use super::{GroupTable, Subgroup};
use crate::error::{Error, Result};

/// Largest order accepted by [`subgroups`].
pub const DEFAULT_SUBGROUP_LIMIT: usize = 72;

#[derive(Clone, PartialEq, Eq, Hash)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, 1u64 << (x % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }
}

/// Subgroup generated by `gens` (0-based), as a membership vector.
pub(crate) fn closure(g: &GroupTable, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; g.order()];
    let mut list = vec![0usize];
    inside[0] = true;
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        i += 1;
        for &s in gens {
            let b = g.mul(a, s);
            if !inside[b] {
                inside[b] = true;
                list.push(b);
            }
        }
    }
    inside
}

/// Closure of an existing subgroup (given as element list) with one more generator.
fn join(g: &GroupTable, elements: &[usize], gens: &[usize]) -> (BitSet, Vec<usize>) {
    let mut set = BitSet::new(g.order());
    let mut list = elements.to_vec();
    for &e in elements {
        set.insert(e);
    }
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        i += 1;
        for &s in gens {
            let b = g.mul(a, s);
            if set.insert(b) {
                list.push(b);
            }
        }
    }
    (set, list)
}

/// All subgroups of `g` together with the two summary counts.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub subgroups: Vec<Subgroup>,
    /// Number of isomorphism classes among the subgroups.
    pub iso_classes: usize,
}

impl SubgroupLattice {
    pub fn total(&self) -> usize {
        self.subgroups.len()
    }
}

/// Which subgroup count a task uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupCount {
    Total,
    IsoClasses,
}

impl SubgroupLattice {
    pub fn count(&self, kind: SubgroupCount) -> usize {
        match kind {
            SubgroupCount::Total => self.total(),
            SubgroupCount::IsoClasses => self.iso_classes,
        }
    }
}

/// Enumerates every subgroup of `g` (order at most [`DEFAULT_SUBGROUP_LIMIT`]).
pub fn subgroups(g: &GroupTable) -> Result<SubgroupLattice> {
    subgroups_with_limit(g, DEFAULT_SUBGROUP_LIMIT)
}

/// Fixpoint enumeration: start from the cyclic subgroups and keep joining
/// each newly found subgroup with every cyclic subgroup until nothing new
/// appears. Every subgroup is a join of cyclic ones, so the result is complete.
pub fn subgroups_with_limit(g: &GroupTable, limit: usize) -> Result<SubgroupLattice> {
    let n = g.order();
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "subgroup enumeration is limited to order {limit}, got {n}"
        )));
    }
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (elements, generators)
    let mut cyclic_gens = Vec::new();
    for x in 0..n {
        let (set, list) = join(g, &[0], &[x]);
        if seen.insert(set) {
            cyclic_gens.push(x);
            found.push((list, vec![x]));
        }
    }
    let mut work: Vec<usize> = (0..found.len()).collect();
    while let Some(idx) = work.pop() {
        for &c in &cyclic_gens {
            let (elements, gens) = &found[idx];
            if elements.contains(&c) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(c);
            let (set, list) = join(g, elements, &new_gens);
            if seen.insert(set) {
                found.push((list, new_gens));
                work.push(found.len() - 1);
            }
        }
    }

    let mut subs: Vec<Subgroup> = found
        .into_iter()
        .map(|(mut list, _)| {
            list.sort_unstable();
            Subgroup { elements: list.into_iter().map(|e| e as u32 + 1).collect() }
        })
        .collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));

    let iso_classes = count_iso_classes(g, &subs);
    Ok(SubgroupLattice { subgroups: subs, iso_classes })
}

fn count_iso_classes(g: &GroupTable, subs: &[Subgroup]) -> usize {
    let mut reps: Vec<(Vec<usize>, GroupTable)> = Vec::new();
    for s in subs {
        let t = s.induced_table(g);
        let profile = t.order_profile();
        let known = reps.iter().any(|(p, r)| *p == profile && find_isomorphism(&t, r, |_| true).is_some());
        if !known {
            reps.push((profile, t));
        }
    }
    reps.len()
}

/// True iff `s` is closed under conjugation by every element of `g`.
pub fn is_normal(g: &GroupTable, s: &Subgroup) -> bool {
    let members: Vec<usize> = s.elements.iter().map(|&e| e as usize - 1).collect();
    (0..g.order()).all(|x| {
        let xi = g.inverse(x);
        members.iter().all(|&h| s.contains(g.mul(g.mul(x, h), xi) as u32 + 1))
    })
}

/// Conjugacy class of a 0-based element.
fn conjugacy_class(g: &GroupTable, a: usize) -> Vec<usize> {
    let mut class: Vec<usize> = (0..g.order()).map(|x| g.mul(g.mul(x, a), g.inverse(x))).collect();
    class.sort_unstable();
    class.dedup();
    class
}

/// Simplicity test: `g` is simple iff it is nontrivial and the normal
/// closure of every non-identity element is all of `g`. Any nontrivial
/// normal subgroup contains such a normal closure, so this is exact and
/// works beyond the subgroup enumeration limit.
pub fn is_simple(g: &GroupTable) -> bool {
    let n = g.order();
    if n == 1 {
        return false;
    }
    let mut covered = vec![false; n];
    covered[0] = true;
    for a in 1..n {
        if covered[a] {
            continue;
        }
        let class = conjugacy_class(g, a);
        for &c in &class {
            covered[c] = true;
        }
        if closure(g, &class).iter().any(|&inside| !inside) {
            return false;
        }
    }
    true
}
