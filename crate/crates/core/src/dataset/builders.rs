use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{
    shift_entries, Dataset, Input, Manifest, Record, RecordMeta, Table, Task, DEFAULT_ORACLE_SAMPLE_RATE,
};
use crate::error::{Error, Result};
use crate::group::{self, alternating_group, catalog, groups_of_order, GroupTable, SubgroupCount};
use crate::latin::{permute_cells, random_permutation, LatinSampler, LatinSquare};
use crate::ring::{is_ring_pair, ring_of_size, RingTables};

// Independent streams for the pieces of one builder.
const LATIN_STREAM: u64 = 0x1a71_5eed;
const VALID_STREAM: u64 = 0x7a11_d000;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permuted(n: usize, cells: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let rows = random_permutation(n, rng);
    let cols = random_permutation(n, rng);
    permute_cells(n, cells, &rows, &cols).expect("fresh permutations have length n")
}

fn single(n: usize, cells: Vec<u32>) -> Input {
    Input::Single(Table { n, cells })
}

/// Shuffles, numbers the records and wraps them with a manifest.
#[allow(clippy::too_many_arguments)]
fn finish(
    builder: &str,
    task: Task,
    config: serde_json::Value,
    n_max: usize,
    classes: usize,
    mut records: Vec<Record>,
    rng: &mut ChaCha8Rng,
    notes: BTreeMap<String, serde_json::Value>,
) -> Dataset {
    records.shuffle(rng);
    for (i, r) in records.iter_mut().enumerate() {
        r.id = i;
    }
    let mut data = Dataset {
        manifest: Manifest {
            builder: builder.to_string(),
            task,
            config,
            n_max,
            classes,
            oracle_sample_rate: DEFAULT_ORACLE_SAMPLE_RATE,
            notes,
        },
        records,
    };
    let counts = data.label_counts();
    data.manifest.notes.insert("label_counts".into(), json!(counts));
    data
}

fn record(x: Input, label: usize, source: &str, seed: u64, delta: u32, perm_id: u64) -> Record {
    Record { id: 0, x, label, meta: RecordMeta { source: source.to_string(), seed, delta, perm_id } }
}

fn latin_negatives(n: usize, count: usize, seed: u64) -> Vec<Record> {
    let mut sampler = LatinSampler::new(n, seed ^ LATIN_STREAM);
    (0..count)
        .map(|i| {
            let sq = sampler.sample();
            record(single(n, sq.cells().to_vec()), 0, "latin", seed, 0, i as u64)
        })
        .collect()
}

fn group_positives(g: &GroupTable, perms: usize, seed: u64, rng: &mut ChaCha8Rng) -> Vec<Record> {
    let n = g.order();
    (0..perms)
        .map(|k| {
            let cells = permuted(n, g.cells(), rng);
            record(single(n, cells), 1, g.name(), seed, 0, k as u64)
        })
        .collect()
}

/// Random Latin squares (label 0) against `k_perms^2` row/column permutations
/// of every catalog group of order `n` (label 1).
pub fn build_cayley_vs_latin(n: usize, k_perms: usize, num_latin: usize, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::param("Cayley-vs-Latin needs n >= 2"));
    }
    let groups = groups_of_order(n);
    if groups.is_empty() {
        return Err(Error::param(format!("no catalog groups of order {n}")));
    }
    let mut rng = rng_for(seed);
    let mut records = latin_negatives(n, num_latin, seed);
    for g in &groups {
        records.extend(group_positives(g, k_perms * k_perms, seed, &mut rng));
    }
    let config = json!({ "n": n, "k_perms": k_perms, "num_latin": num_latin, "seed": seed,
        "groups": groups.iter().map(|g| g.name()).collect::<Vec<_>>() });
    Ok(finish("cayley-vs-latin", Task::CayleyTable, config, n, 1, records, &mut rng, BTreeMap::new()))
}

/// Training data sees only the groups at 1-based slice positions `seen`;
/// validation holds permutations of the remaining groups (all label 1).
pub fn build_unseen_group_split(
    n: usize,
    seen: &[usize],
    k_perms: usize,
    num_latin: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let groups = groups_of_order(n);
    if seen.is_empty() || seen.len() >= groups.len() {
        return Err(Error::param(format!(
            "seen set must be a proper nonempty subset of the {} groups of order {n}",
            groups.len()
        )));
    }
    if let Some(&bad) = seen.iter().find(|&&i| i == 0 || i > groups.len()) {
        return Err(Error::param(format!("group index {bad} out of range 1..={}", groups.len())));
    }
    let mut rng = rng_for(seed);
    let mut vrng = rng_for(seed ^ VALID_STREAM);
    let mut train = latin_negatives(n, num_latin, seed);
    let mut valid = Vec::new();
    let perms = k_perms * k_perms;
    for (i, g) in groups.iter().enumerate() {
        if seen.contains(&(i + 1)) {
            train.extend(group_positives(g, perms, seed, &mut rng));
        } else {
            valid.extend(group_positives(g, perms, seed, &mut vrng));
        }
    }
    let names = |pick: bool| -> Vec<&str> {
        groups
            .iter()
            .enumerate()
            .filter(|(i, _)| seen.contains(&(i + 1)) == pick)
            .map(|(_, g)| g.name())
            .collect()
    };
    let config = json!({ "n": n, "seen": seen, "k_perms": k_perms, "num_latin": num_latin,
        "seed": seed, "seen_groups": names(true), "unseen_groups": names(false) });
    let train = finish(
        "unseen-group/train",
        Task::CayleyTable,
        config.clone(),
        n,
        1,
        train,
        &mut rng,
        BTreeMap::new(),
    );
    let valid =
        finish("unseen-group/valid", Task::CayleyTable, config, n, 1, valid, &mut vrng, BTreeMap::new());
    Ok((train, valid))
}

/// `catalog(32)` together with `A5` and `A6`.
pub fn simplicity_desk_corpus() -> Vec<GroupTable> {
    let mut corpus = catalog(32);
    corpus.push(alternating_group(5).expect("A5"));
    corpus.push(alternating_group(6).expect("A6"));
    corpus
}

/// Simple groups (label 1) get `k_simple^2` permutations, the others
/// `k_nonsimple^2`; every table is padded to the largest corpus order.
pub fn build_simplicity(
    corpus: &[GroupTable],
    k_simple: usize,
    k_nonsimple: usize,
    seed: u64,
) -> Result<Dataset> {
    let labels: Vec<usize> = corpus.iter().map(|g| group::is_simple(g) as usize).collect();
    if !labels.contains(&0) || !labels.contains(&1) {
        return Err(Error::param("simplicity corpus needs simple and non-simple groups"));
    }
    let n_max = corpus.iter().map(|g| g.order()).max().unwrap();
    let mut rng = rng_for(seed);
    let mut records = Vec::new();
    for (g, &label) in corpus.iter().zip(&labels) {
        let k = if label == 1 { k_simple } else { k_nonsimple };
        let mut recs = group_positives(g, k * k, seed, &mut rng);
        for r in &mut recs {
            r.label = label;
        }
        records.extend(recs);
    }
    let simple: Vec<&str> =
        corpus.iter().zip(&labels).filter(|(_, &l)| l == 1).map(|(g, _)| g.name()).collect();
    let config = json!({ "corpus_size": corpus.len(), "k_simple": k_simple,
        "k_nonsimple": k_nonsimple, "seed": seed });
    let mut notes = BTreeMap::new();
    notes.insert("simple_groups".into(), json!(simple));
    Ok(finish("simplicity", Task::Simplicity, config, n_max, 1, records, &mut rng, notes))
}

/// Three-way bucket of a subgroup count: 0 below `t1`, 1 below `t2`, else 2.
pub fn subgroup_class(count: usize, t1: usize, t2: usize) -> usize {
    if count < t1 {
        0
    } else if count < t2 {
        1
    } else {
        2
    }
}

/// Subgroup-count categories with `k_perms^2` permutations per group.
pub fn build_subgroup_classes(
    corpus: &[GroupTable],
    thresholds: (usize, usize),
    k_perms: usize,
    count: SubgroupCount,
    seed: u64,
) -> Result<Dataset> {
    let (t1, t2) = thresholds;
    if corpus.is_empty() {
        return Err(Error::param("empty corpus"));
    }
    if t1 >= t2 {
        return Err(Error::param(format!("thresholds must satisfy t1 < t2, got ({t1}, {t2})")));
    }
    let n_max = corpus.iter().map(|g| g.order()).max().unwrap();
    let mut rng = rng_for(seed);
    let mut records = Vec::new();
    let mut per_group = BTreeMap::new();
    for g in corpus {
        let c = group::subgroups(g)?.count(count);
        let label = subgroup_class(c, t1, t2);
        per_group.insert(g.name().to_string(), json!({ "count": c, "label": label }));
        let mut recs = group_positives(g, k_perms * k_perms, seed, &mut rng);
        for r in &mut recs {
            r.label = label;
        }
        records.extend(recs);
    }
    let config = json!({ "corpus_size": corpus.len(), "t1": t1, "t2": t2,
        "k_perms": k_perms, "count": count, "seed": seed });
    let mut notes = BTreeMap::new();
    notes.insert("groups".into(), json!(per_group));
    Ok(finish(
        "subgroup-classes",
        Task::SubgroupClasses { t1, t2, count },
        config,
        n_max,
        2,
        records,
        &mut rng,
        notes,
    ))
}

fn iso_side(groups: &[GroupTable], pairs_per_class: usize, seed: u64, rng: &mut ChaCha8Rng) -> Vec<Record> {
    let mut delta = 0u32;
    let mut next_table = |g: &GroupTable, rng: &mut ChaCha8Rng| {
        let cells = shift_entries(&permuted(g.order(), g.cells(), rng), delta);
        delta += 1;
        Table { n: g.order(), cells }
    };
    let mut out = Vec::with_capacity(2 * pairs_per_class);
    for k in 0..pairs_per_class {
        // alternate labels so both classes see the same range of shifts
        for label in [1usize, 0] {
            let i = rng.gen_range(0..groups.len());
            let j = if label == 1 {
                i
            } else {
                let j = rng.gen_range(0..groups.len() - 1);
                if j >= i {
                    j + 1
                } else {
                    j
                }
            };
            let a = next_table(&groups[i], rng);
            let b = next_table(&groups[j], rng);
            let d = a.cells.iter().min().copied().unwrap_or(1) - 1;
            let source = format!("{}|{}", groups[i].name(), groups[j].name());
            out.push(record(Input::Pair(a, b), label, &source, seed, d, k as u64));
        }
    }
    out
}

/// Pairs of permuted, entry-shifted tables labelled 1 iff both come from the
/// same group. Training pairs use only `s1`, validation pairs only `s2`;
/// each side holds `pairs_per_class` records of each label.
pub fn build_group_iso_pairs(
    s1: &[GroupTable],
    s2: &[GroupTable],
    pairs_per_class: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if s1.len() < 2 || s2.len() < 2 {
        return Err(Error::param("each side needs at least two groups to form negatives"));
    }
    if s1.iter().any(|a| s2.iter().any(|b| group::are_isomorphic(a, b).is_some())) {
        return Err(Error::param("the two group sets must be disjoint up to isomorphism"));
    }
    let n_max = s1.iter().chain(s2).map(|g| g.order()).max().unwrap();
    let mut rng = rng_for(seed);
    let mut vrng = rng_for(seed ^ VALID_STREAM);
    let train = iso_side(s1, pairs_per_class, seed, &mut rng);
    let valid = iso_side(s2, pairs_per_class, seed, &mut vrng);
    let names = |s: &[GroupTable]| s.iter().map(|g| g.name().to_string()).collect::<Vec<_>>();
    let config =
        json!({ "s1": names(s1), "s2": names(s2), "pairs_per_class": pairs_per_class, "seed": seed });
    Ok((
        finish(
            "group-iso/train",
            Task::GroupIsomorphism,
            config.clone(),
            n_max,
            1,
            train,
            &mut rng,
            BTreeMap::new(),
        ),
        finish(
            "group-iso/valid",
            Task::GroupIsomorphism,
            config,
            n_max,
            1,
            valid,
            &mut vrng,
            BTreeMap::new(),
        ),
    ))
}

/// Correct and mismatched table pairs per ring.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct RingMatchConfig {
    pub k_correct: usize,
    pub k_incorrect: usize,
}

const MISMATCH_ATTEMPTS: usize = 1000;

fn ring_records(
    ring: &RingTables,
    cfg: RingMatchConfig,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Record>> {
    let n = ring.n;
    let name = ring.name();
    if cfg.k_incorrect > 0 && cfg.k_correct < 2 {
        return Err(Error::param(format!("ring {name}: mismatches need at least two permuted variants")));
    }
    let variants: Vec<(Vec<u32>, Vec<u32>)> = (0..cfg.k_correct)
        .map(|_| {
            let rows = random_permutation(n, rng);
            let cols = random_permutation(n, rng);
            ring.paired_permute(&rows, &cols).expect("valid permutations")
        })
        .collect();
    let mut out: Vec<Record> = variants
        .iter()
        .enumerate()
        .map(|(j, (m, a))| {
            let x = Input::Pair(Table { n, cells: m.clone() }, Table { n, cells: a.clone() });
            record(x, 1, &name, seed, 0, j as u64)
        })
        .collect();
    for k in 0..cfg.k_incorrect {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > MISMATCH_ATTEMPTS {
                return Err(Error::param(format!("ring {name}: cannot form an inconsistent mismatch")));
            }
            let j = rng.gen_range(0..variants.len());
            let jp = rng.gen_range(0..variants.len());
            if j == jp {
                continue;
            }
            let (m, _) = &variants[j];
            let (_, a) = &variants[jp];
            // a mismatch that still presents a ring would be mislabelled
            if is_ring_pair(n, m, a) {
                continue;
            }
            let x = Input::Pair(Table { n, cells: m.clone() }, Table { n, cells: a.clone() });
            out.push(record(x, 0, &name, seed, 0, (cfg.k_correct + k) as u64));
            break;
        }
    }
    Ok(out)
}

/// Jointly permuted `(M_j, A_j)` pairs (label 1) and cross-matched
/// `(M_j, A_j')`, `j != j'`, pairs (label 0) for each ring.
pub fn build_ring_match(rings: &[RingTables], cfg: RingMatchConfig, seed: u64) -> Result<Dataset> {
    if rings.is_empty() {
        return Err(Error::param("ring match needs at least one ring"));
    }
    let n_max = rings.iter().map(|r| r.n).max().unwrap();
    let mut rng = rng_for(seed);
    let mut records = Vec::new();
    for ring in rings {
        records.extend(ring_records(ring, cfg, seed, &mut rng)?);
    }
    let config = json!({ "rings": rings.iter().map(|r| r.name()).collect::<Vec<_>>(),
        "k_correct": cfg.k_correct, "k_incorrect": cfg.k_incorrect, "seed": seed });
    Ok(finish("ring-match", Task::RingMatch, config, n_max, 1, records, &mut rng, BTreeMap::new()))
}

/// Rings from the prime factorizations of `j = 2..=size`; the first
/// `train_rings` go to training, the rest to validation, all padded to `size`.
pub fn build_ring_collection(
    size: usize,
    train_rings: usize,
    cfg: RingMatchConfig,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(train_rings >= 2 && train_rings + 1 < size) {
        return Err(Error::param(format!("need 2 <= F < N - 1, got F = {train_rings}, N = {size}")));
    }
    let rings: Vec<RingTables> = (2..=size).map(ring_of_size).collect::<Result<_>>()?;
    let (seen, unseen) = rings.split_at(train_rings);
    let mut rng = rng_for(seed);
    let mut vrng = rng_for(seed ^ VALID_STREAM);
    let mut train = Vec::new();
    for r in seen {
        train.extend(ring_records(r, cfg, seed, &mut rng)?);
    }
    let mut valid = Vec::new();
    for r in unseen {
        valid.extend(ring_records(r, cfg, seed, &mut vrng)?);
    }
    let names = |rs: &[RingTables]| rs.iter().map(|r| r.name()).collect::<Vec<_>>();
    let config = json!({ "N": size, "F": train_rings, "k_correct": cfg.k_correct,
        "k_incorrect": cfg.k_incorrect, "seed": seed,
        "train_rings": names(seen), "valid_rings": names(unseen) });
    Ok((
        finish(
            "ring-collection/train",
            Task::RingMatch,
            config.clone(),
            size,
            1,
            train,
            &mut rng,
            BTreeMap::new(),
        ),
        finish("ring-collection/valid", Task::RingMatch, config, size, 1, valid, &mut vrng, BTreeMap::new()),
    ))
}

/// Entry-shifted Cayley recognition: the `k`-th permutation of each source
/// has every entry raised by `k`. Positives are `k_perms^2` permutations of
/// each group of order `n`; negatives are `num_negative` permutations of one
/// fixed Latin square that is not a group table.
pub fn build_entry_shift(n: usize, k_perms: usize, num_negative: usize, seed: u64) -> Result<Dataset> {
    let groups = groups_of_order(n);
    if groups.is_empty() {
        return Err(Error::param(format!("no catalog groups of order {n}")));
    }
    let mut sampler = LatinSampler::new(n, seed ^ LATIN_STREAM);
    let base: LatinSquare = (0..1000)
        .map(|_| sampler.sample())
        .find(|sq| !group::is_group_table(sq))
        .ok_or_else(|| Error::param(format!("no non-group Latin square of order {n} found")))?;
    let mut rng = rng_for(seed);
    let mut records = Vec::new();
    for g in &groups {
        for k in 0..k_perms * k_perms {
            let cells = shift_entries(&permuted(n, g.cells(), &mut rng), k as u32);
            records.push(record(single(n, cells), 1, g.name(), seed, k as u32, k as u64));
        }
    }
    for k in 0..num_negative {
        let cells = shift_entries(&permuted(n, base.cells(), &mut rng), k as u32);
        records.push(record(single(n, cells), 0, "latin", seed, k as u32, k as u64));
    }
    let config = json!({ "n": n, "k_perms": k_perms, "num_negative": num_negative, "seed": seed });
    Ok(finish("entry-shift", Task::CayleyTable, config, n, 1, records, &mut rng, BTreeMap::new()))
}
