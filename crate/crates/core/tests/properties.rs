mod common;

use algebra_learn::dataset::{
    build_cayley_vs_latin, build_ring_match, pad, read_dataset, shift_entries, split_indices, write_dataset,
    Input, Record, RecordMeta, RingMatchConfig, Table,
};
use algebra_learn::group::{are_isomorphic, catalog, is_group_table, quadrangle_criterion, GroupTable};
use algebra_learn::latin::{random_latin_square, LatinSquare};
use algebra_learn::learn::{encode, EncodingScheme};
use algebra_learn::metrics::{confusion, phi_binary, phi_multiclass, Stat};
use algebra_learn::ring::{cyclic_product_ring, is_ring_pair};
use proptest::prelude::*;
use proptest::sample::select;

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn small_group() -> impl Strategy<Value = GroupTable> {
    select(catalog(12))
}

fn group_and_perms() -> impl Strategy<Value = (GroupTable, Vec<usize>, Vec<usize>)> {
    small_group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), perm(n), perm(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permuted_cayley_tables_stay_groups((g, rows, cols) in group_and_perms()) {
        let sq = LatinSquare::new(g.order(), g.cells().to_vec()).unwrap().permute(&rows, &cols).unwrap();
        prop_assert!(quadrangle_criterion(&sq));
        prop_assert!(is_group_table(&sq));
        let red = sq.reduce();
        prop_assert!(red.is_reduced());
        let h = GroupTable::new("reduced", g.order(), red.cells().to_vec()).unwrap();
        prop_assert!(are_isomorphic(&g, &h).is_some());
    }

    #[test]
    fn quadrangle_agrees_with_isotope_test(n in 1usize..=8, seed in any::<u64>()) {
        let sq = random_latin_square(n, seed);
        prop_assert_eq!(quadrangle_criterion(&sq), is_group_table(&sq));
    }

    #[test]
    fn padding_keeps_live_block(m in 1usize..6, extra in 0usize..4, delta in 0u32..50, seed in any::<u64>()) {
        let sq = random_latin_square(m, seed);
        let shifted = shift_entries(sq.cells(), delta);
        let size = m + extra;
        let padded = pad(&shifted, m, size).unwrap();
        for r in 0..size {
            for c in 0..size {
                let v = padded[r * size + c];
                if r < m && c < m {
                    prop_assert_eq!(v, sq.get(r, c) + delta);
                } else {
                    prop_assert_eq!(v, 0);
                }
            }
        }
        let back = Table::new(m, shifted).unwrap().unshifted(delta);
        prop_assert_eq!(back, sq.cells().to_vec());
    }

    #[test]
    fn encodings_respect_their_ranges(m in 1usize..6, extra in 0usize..3, delta in 0u32..5, seed in any::<u64>()) {
        let sq = random_latin_square(m, seed);
        let table = Table::new(m, shift_entries(sq.cells(), delta)).unwrap();
        let rec = Record { id: 0, x: Input::Single(table), label: 0, meta: RecordMeta::default() };
        let size = m + extra;
        let max_symbol = m as u32 + delta;
        let one_hot = encode(&rec, EncodingScheme::OneHot, size, max_symbol).unwrap();
        let dense = one_hot.to_dense();
        let width = max_symbol as usize + 1;
        prop_assert_eq!(dense.len(), size * size * width);
        for block in dense.chunks(width) {
            prop_assert_eq!(block.iter().filter(|&&v| v == 1.0).count(), 1);
            prop_assert!(block.iter().all(|&v| v == 0.0 || v == 1.0));
        }
        let scaled = encode(&rec, EncodingScheme::ScaledInteger, size, max_symbol).unwrap().to_dense();
        prop_assert_eq!(scaled.len(), size * size);
        prop_assert!(scaled.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn stat_ignores_order(mut v in prop::collection::vec(-1.0f64..1.0, 1..20), seed in any::<u64>()) {
        let a = Stat::of(v.iter().copied()).unwrap();
        let k = (seed as usize) % v.len();
        v.rotate_left(k);
        v.reverse();
        prop_assert_eq!(a, Stat::of(v).unwrap());
    }

    #[test]
    fn phi_is_symmetric_and_bounded(pairs in prop::collection::vec((0usize..2, 0usize..2), 1..60)) {
        let (pred, actual): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let ab = phi_binary(&confusion(&pred, &actual, 1).unwrap()).unwrap();
        let ba = phi_binary(&confusion(&actual, &pred, 1).unwrap()).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let (Some(x), Some(y)) = (ab, ba) {
            prop_assert!((x - y).abs() < 1e-12);
            prop_assert!(x.abs() <= 1.0 + 1e-12);
            let multi = phi_multiclass(&confusion(&pred, &actual, 1).unwrap()).unwrap();
            prop_assert!((multi - x).abs() < 1e-12);
        }
    }

    #[test]
    fn split_is_a_partition(len in 1usize..300, gamma in 0.01f64..1.0, seed in any::<u64>()) {
        let (t, v) = split_indices(len, gamma, seed).unwrap();
        prop_assert_eq!(t.len(), (gamma * len as f64).round() as usize);
        let mut all: Vec<usize> = t.into_iter().chain(v).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..len).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn permuted_rings_stay_rings(rows in perm(6), cols in perm(6)) {
        let r = cyclic_product_ring(&[2, 3]).unwrap();
        let (m, a) = r.paired_permute(&rows, &cols).unwrap();
        prop_assert!(is_ring_pair(6, &m, &a));
    }

    #[test]
    fn builders_are_byte_deterministic(seed in any::<u64>()) {
        let write = |s: u64| {
            let mut buf = Vec::new();
            write_dataset(&mut buf, &build_cayley_vs_latin(4, 2, 6, s).unwrap()).unwrap();
            buf
        };
        let a = write(seed);
        prop_assert_eq!(&a, &write(seed));
        let back = read_dataset(&a[..]).unwrap();
        let mut again = Vec::new();
        write_dataset(&mut again, &back).unwrap();
        prop_assert_eq!(a, again);
    }

    #[test]
    fn ring_records_match_their_oracle(seed in any::<u64>()) {
        let r = cyclic_product_ring(&[2, 2]).unwrap();
        let d = build_ring_match(&[r], RingMatchConfig { k_correct: 4, k_incorrect: 4 }, seed).unwrap();
        prop_assert!(d.oracle_check(1.0, seed).unwrap().is_empty());
    }
}
