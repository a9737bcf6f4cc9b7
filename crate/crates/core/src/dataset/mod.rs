//! Labelled datasets built from exact algebraic tables.
//!
//! Records keep only the live `m x m` block of each table; padding to the
//! dataset's `n_max` happens on output and during feature encoding.

mod builders;
mod io;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, GroupTable, SubgroupCount};
use crate::latin::LatinSquare;
use crate::ring;

pub use builders::{
    build_cayley_vs_latin, build_entry_shift, build_group_iso_pairs, build_ring_collection, build_ring_match,
    build_simplicity, build_subgroup_classes, build_unseen_group_split, simplicity_desk_corpus,
    subgroup_class, RingMatchConfig,
};
pub use io::{parse_manifest_line, parse_record_line, read_dataset, write_dataset, MANIFEST_PREFIX};

/// A square table of labels, live block only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub n: usize,
    pub cells: Vec<u32>,
}

impl Table {
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::shape(format!("{} entries for a {n}x{n} table", cells.len())));
        }
        Ok(Table { n, cells })
    }

    pub fn max_entry(&self) -> u32 {
        self.cells.iter().copied().max().unwrap_or(0)
    }

    /// The live block with `delta` subtracted again; entries below `delta`
    /// become 0 and fail any later Latin check.
    pub fn unshifted(&self, delta: u32) -> Vec<u32> {
        self.cells.iter().map(|&v| v.saturating_sub(delta)).collect()
    }
}

/// Bottom-right zero padding of an `m x m` row-major table to `size x size`.
pub fn pad(cells: &[u32], m: usize, size: usize) -> Result<Vec<u32>> {
    if cells.len() != m * m {
        return Err(Error::shape(format!("{} entries for a {m}x{m} table", cells.len())));
    }
    if m > size {
        return Err(Error::shape(format!("cannot pad a {m}x{m} table into {size}x{size}")));
    }
    let mut out = vec![0u32; size * size];
    for r in 0..m {
        out[r * size..r * size + m].copy_from_slice(&cells[r * m..(r + 1) * m]);
    }
    Ok(out)
}

/// Adds `delta` to every entry. Apply before padding: padding zeros are
/// never shifted.
pub fn shift_entries(cells: &[u32], delta: u32) -> Vec<u32> {
    cells.iter().map(|&v| v + delta).collect()
}

/// Record input: one table or a (multiplication, addition) style pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Single(Table),
    Pair(Table, Table),
}

impl Input {
    pub fn order(&self) -> usize {
        match self {
            Input::Single(t) | Input::Pair(t, _) => t.n,
        }
    }

    pub fn tables(&self) -> Vec<&Table> {
        match self {
            Input::Single(t) => vec![t],
            Input::Pair(a, b) => vec![a, b],
        }
    }

    pub fn max_entry(&self) -> u32 {
        self.tables().iter().map(|t| t.max_entry()).max().unwrap_or(0)
    }
}

/// Provenance of a record.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    /// Name of the group, ring or square family the record came from.
    pub source: String,
    /// Seed of the builder that produced the record.
    pub seed: u64,
    /// Entry shift applied to the live block.
    pub delta: u32,
    /// Index of the permutation (or sample) within its source.
    pub perm_id: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub id: usize,
    pub x: Input,
    pub label: usize,
    pub meta: RecordMeta,
}

/// What the labels of a dataset mean, and so which exact oracle checks them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    /// 1 iff the square is a (permuted) Cayley table.
    CayleyTable,
    /// 1 iff the group is simple.
    Simplicity,
    /// Subgroup count bucketed by two thresholds.
    SubgroupClasses { t1: usize, t2: usize, count: SubgroupCount },
    /// 1 iff the two tables present isomorphic groups.
    GroupIsomorphism,
    /// 1 iff the (mult, add) pair presents a ring.
    RingMatch,
}

/// Builder name, configuration and oracle settings, written as the first
/// NDJSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub builder: String,
    pub task: Task,
    pub config: serde_json::Value,
    pub n_max: usize,
    /// Largest label; the task has `classes + 1` categories.
    pub classes: usize,
    pub oracle_sample_rate: f64,
    #[serde(default)]
    pub notes: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: Manifest,
    pub records: Vec<Record>,
}

/// Oracle sample rate written into every manifest.
pub const DEFAULT_ORACLE_SAMPLE_RATE: f64 = 0.01;

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.manifest.n_max
    }

    /// Maximum label `K`.
    pub fn classes(&self) -> usize {
        self.manifest.classes
    }

    /// Largest entry over all records, the symbol bound used by encoders.
    pub fn max_symbol(&self) -> u32 {
        self.records.iter().map(|r| r.x.max_entry()).max().unwrap_or(0)
    }

    pub fn label_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes() + 1];
        for r in &self.records {
            counts[r.label] += 1;
        }
        counts
    }

    pub fn labels(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.label).collect()
    }

    /// A dataset holding the records at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            manifest: self.manifest.clone(),
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }

    /// Re-checks a random `rate` fraction of records (at least one) against
    /// the exact oracle of the task. Returns the ids whose label disagrees.
    pub fn oracle_check(&self, rate: f64, seed: u64) -> Result<Vec<usize>> {
        if self.records.is_empty() {
            return Ok(Vec::new());
        }
        let mut idx: Vec<usize> = (0..self.records.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let take = ((rate * self.records.len() as f64).ceil() as usize).clamp(1, idx.len());
        let mut bad = Vec::new();
        for &i in &idx[..take] {
            let r = &self.records[i];
            if oracle_label(&self.manifest.task, r)? != r.label {
                bad.push(r.id);
            }
        }
        Ok(bad)
    }
}

/// Recovers the reduced group table of a permuted (unshifted) Cayley table.
fn group_from_cells(n: usize, cells: Vec<u32>) -> Result<GroupTable> {
    let red = LatinSquare::new(n, cells)?.reduce();
    GroupTable::new("record", n, red.cells().to_vec())
}

/// Exact label of a record under `task`.
pub fn oracle_label(task: &Task, r: &Record) -> Result<usize> {
    let delta = r.meta.delta;
    let label = match (task, &r.x) {
        (Task::CayleyTable, Input::Single(t)) => {
            let sq = LatinSquare::new(t.n, t.unshifted(delta))?;
            group::is_group_table(&sq) as usize
        }
        (Task::Simplicity, Input::Single(t)) => {
            group::is_simple(&group_from_cells(t.n, t.unshifted(delta))?) as usize
        }
        (Task::SubgroupClasses { t1, t2, count }, Input::Single(t)) => {
            let g = group_from_cells(t.n, t.unshifted(delta))?;
            subgroup_class(group::subgroups(&g)?.count(*count), *t1, *t2)
        }
        (Task::GroupIsomorphism, Input::Pair(a, b)) => {
            // each table of a pair carries its own shift; recover it from the minimum entry
            let ga =
                group_from_cells(a.n, a.unshifted(a.cells.iter().min().map_or(0, |m| m.saturating_sub(1))))?;
            let gb =
                group_from_cells(b.n, b.unshifted(b.cells.iter().min().map_or(0, |m| m.saturating_sub(1))))?;
            group::are_isomorphic(&ga, &gb).is_some() as usize
        }
        (Task::RingMatch, Input::Pair(m, a)) => {
            ring::is_ring_pair(m.n, &m.unshifted(delta), &a.unshifted(delta)) as usize
        }
        _ => return Err(Error::param(format!("record {} does not match task {task:?}", r.id))),
    };
    Ok(label)
}

/// Uniformly random disjoint split with `|train| = round(gamma * N)`.
pub fn split_indices(len: usize, gamma: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::param(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (gamma * len as f64).round() as usize;
    let valid = idx.split_off(cut.min(len));
    Ok((idx, valid))
}

/// Splits `data` into training and validation datasets.
pub fn split(data: &Dataset, gamma: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (t, v) = split_indices(data.len(), gamma, seed)?;
    Ok((data.subset(&t), data.subset(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_small_table() {
        assert_eq!(pad(&[1, 2, 2, 1], 2, 3).unwrap(), vec![1, 2, 0, 2, 1, 0, 0, 0, 0]);
        assert_eq!(pad(&[1, 2, 2, 1], 2, 2).unwrap(), vec![1, 2, 2, 1]);
        assert!(matches!(pad(&[1, 2, 2, 1], 2, 1), Err(Error::Shape(_))));
    }

    #[test]
    fn shift_c3() {
        let c3 = [1, 2, 3, 2, 3, 1, 3, 1, 2];
        assert_eq!(shift_entries(&c3, 1), vec![2, 3, 4, 3, 4, 2, 4, 2, 3]);
        assert_eq!(shift_entries(&c3, 0), c3.to_vec());
    }

    #[test]
    fn split_sizes() {
        let (t, v) = split_indices(20000, 0.25, 3).unwrap();
        assert_eq!((t.len(), v.len()), (5000, 15000));
        let (t, v) = split_indices(10, 1.0, 3).unwrap();
        assert_eq!((t.len(), v.len()), (10, 0));
        assert!(split_indices(10, 0.0, 1).is_err());
        assert!(split_indices(10, 1.5, 1).is_err());
    }

    #[test]
    fn split_is_a_partition() {
        let (mut t, v) = split_indices(101, 0.3, 9).unwrap();
        t.extend(v);
        t.sort_unstable();
        assert_eq!(t, (0..101).collect::<Vec<_>>());
    }
}
