mod common;

use std::collections::HashMap;

use algebra_learn::group::{
    are_isomorphic, catalog, cyclic_group, direct_product, groups_of_order, is_group_table, is_simple,
    quadrangle_criterion, subgroups, GroupTable, SubgroupCount,
};
use algebra_learn::latin::{random_latin_square, LatinSquare};
use algebra_learn::ring::{cyclic_product_ring, is_ring_pair, partitions, ring_of_size, two_power_ring};
use common::{all_latin_squares, divisor_count, satisfies_group_axioms, satisfies_ring_axioms};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn is_reduced(n: usize, cells: &[u32]) -> bool {
    (0..n).all(|i| cells[i] == i as u32 + 1 && cells[i * n] == i as u32 + 1)
}

#[test]
fn latin_square_counts_through_order_four() {
    let counts: Vec<usize> = (1..=4).map(|n| all_latin_squares(n).len()).collect();
    assert_eq!(counts, [1, 2, 12, 576]);
    let reduced = all_latin_squares(4).iter().filter(|c| is_reduced(4, c)).count();
    assert_eq!(reduced, 4);
}

// a loop isotopic to a group is itself a group, so on reduced squares the
// isotopy test must agree with the plain axioms
#[test]
fn reduced_squares_are_groups_exactly_when_axioms_hold() {
    for n in 1..=5 {
        let reduced: Vec<Vec<u32>> = all_latin_squares(n).into_iter().filter(|c| is_reduced(n, c)).collect();
        for cells in &reduced {
            let sq = LatinSquare::new(n, cells.clone()).unwrap();
            let axioms = satisfies_group_axioms(n, cells);
            assert_eq!(is_group_table(&sq), axioms, "order {n}: {cells:?}");
            assert_eq!(quadrangle_criterion(&sq), axioms, "order {n}: {cells:?}");
        }
        if n == 5 {
            assert_eq!(reduced.len(), 56);
        }
    }
}

#[test]
fn sampler_is_uniform_on_order_four() {
    let draws = 576 * 25;
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for seed in 0..draws as u64 {
        *seen.entry(random_latin_square(4, seed).cells().to_vec()).or_default() += 1;
    }
    assert_eq!(seen.len(), 576, "every order-4 square is reachable");
    let expected = draws as f64 / 576.0;
    let chi: f64 = seen.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new(575.0).unwrap().cdf(chi);
    assert!(p > 1e-3, "chi^2 = {chi:.1}, p = {p:.2e}");
}

#[test]
fn catalog_groups_are_groups_and_pairwise_distinct() {
    for n in 1..=16 {
        let gs = groups_of_order(n);
        for g in &gs {
            assert!(satisfies_group_axioms(n, g.cells()), "{}", g.name());
        }
        for (i, g) in gs.iter().enumerate() {
            for h in &gs[i + 1..] {
                assert!(are_isomorphic(g, h).is_none(), "{} ~ {}", g.name(), h.name());
            }
        }
    }
}

#[test]
fn isomorphism_map_is_a_homomorphism() {
    for g in catalog(12) {
        let n = g.order();
        // relabel through the reversal of the non-identity elements
        let sigma: Vec<u32> = (0..n as u32).map(|i| if i == 0 { 1 } else { n as u32 - i + 1 }).collect();
        let mut cells = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                cells[(sigma[a] as usize - 1) * n + sigma[b] as usize - 1] =
                    sigma[g.cells()[a * n + b] as usize - 1];
            }
        }
        let h = GroupTable::new("relabelled", n, cells).unwrap();
        let phi = are_isomorphic(&g, &h).expect("relabelled copy is isomorphic");
        for a in 0..n {
            for b in 0..n {
                let ab = g.cells()[a * n + b] as usize - 1;
                let lhs = phi[ab] as usize - 1;
                let rhs = h.cells()[(phi[a] as usize - 1) * n + phi[b] as usize - 1] as usize - 1;
                assert_eq!(lhs, rhs, "{}", g.name());
            }
        }
    }
}

#[test]
fn cyclic_subgroups_match_divisors_and_lagrange_holds() {
    for n in 1..=64 {
        assert_eq!(subgroups(&cyclic_group(n).unwrap()).unwrap().total(), divisor_count(n), "C{n}");
    }
    for g in catalog(32) {
        for s in subgroups(&g).unwrap().subgroups {
            assert_eq!(g.order() % s.order(), 0, "{}", g.name());
            assert!(satisfies_group_axioms(s.order(), s.induced_table(&g).cells()));
        }
    }
}

#[test]
fn known_subgroup_counts() {
    let c2 = cyclic_group(2).unwrap();
    let v4 = direct_product(&c2, &c2);
    let lat = subgroups(&v4).unwrap();
    assert_eq!((lat.count(SubgroupCount::Total), lat.count(SubgroupCount::IsoClasses)), (5, 3));
    assert_eq!(subgroups(&cyclic_group(1).unwrap()).unwrap().total(), 1);
    let q8 = groups_of_order(8).into_iter().find(|g| g.name() == "Q8").unwrap();
    assert_eq!(subgroups(&q8).unwrap().total(), 6);
}

#[test]
fn simple_groups_in_small_catalog() {
    let primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for g in catalog(32) {
        let want = primes.contains(&g.order());
        assert_eq!(is_simple(&g), want, "{}", g.name());
    }
}

#[test]
fn constructed_rings_satisfy_axioms() {
    let mut rings = Vec::new();
    for j in 2..=64 {
        rings.push(ring_of_size(j).unwrap());
        rings.push(cyclic_product_ring(&[j]).unwrap());
    }
    for total in 1..=6 {
        for p in partitions(total) {
            rings.push(two_power_ring(&p).unwrap());
        }
    }
    rings.push(cyclic_product_ring(&[2, 3]).unwrap());
    for r in &rings {
        assert!(satisfies_ring_axioms(r.n, &r.mult, &r.add), "{}", r.name());
        assert!(is_ring_pair(r.n, &r.mult, &r.add), "{}", r.name());
        assert_eq!(r.first_distributivity_violation(), None);
    }
}

#[test]
fn partition_counts() {
    let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
    assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22]);
}
