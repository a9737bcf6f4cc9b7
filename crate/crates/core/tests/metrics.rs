mod common;

use algebra_learn::metrics::{accuracy, confusion, f1, phi_binary, phi_multiclass, ConfusionMatrix, Stat};
use approx::assert_relative_eq;
use common::chi_squared;
use proptest::prelude::*;

#[test]
fn hand_computed_correlation() {
    // tp 40, fp 10, fn 5, tn 45: (40*45 - 10*5) / sqrt(50*45*55*50)
    let cm = ConfusionMatrix::binary(40, 10, 5, 45);
    let phi = phi_binary(&cm).unwrap().unwrap();
    assert_relative_eq!(phi, 1750.0 / (50.0f64 * 45.0 * 55.0 * 50.0).sqrt(), max_relative = 1e-12);
    assert_relative_eq!(phi, 0.70353, epsilon = 1e-5);
    assert_relative_eq!(accuracy(&cm).unwrap(), 0.85);
    assert_relative_eq!(f1(&cm).unwrap().unwrap(), 80.0 / 95.0);
}

#[test]
fn degenerate_margins_leave_correlation_undefined() {
    assert_eq!(phi_binary(&ConfusionMatrix::binary(0, 0, 7, 3)).unwrap(), None);
    assert_eq!(phi_binary(&ConfusionMatrix::binary(5, 5, 0, 0)).unwrap(), None);
    assert_eq!(f1(&ConfusionMatrix::binary(0, 0, 0, 9)).unwrap(), None);
}

#[test]
fn stat_uses_sample_deviation() {
    let s = Stat::of([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
    assert_relative_eq!(s.mean, 5.0);
    assert_relative_eq!(s.std, (32.0f64 / 7.0).sqrt(), max_relative = 1e-12);
    assert_eq!(Stat::of(std::iter::empty()), None);
}

fn tables(max_label: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    prop::collection::vec((0..=max_label, 0..=max_label), 2..80).prop_map(|v| v.into_iter().unzip())
}

proptest! {
    #[test]
    fn binary_phi_squared_is_chi_squared_over_n((pred, actual) in tables(1)) {
        let cm = confusion(&pred, &actual, 1).unwrap();
        if let Some(phi) = phi_binary(&cm).unwrap() {
            let (tp, fp, fn_, tn) = cm.cells().unwrap();
            let table = vec![vec![tp as f64, fp as f64], vec![fn_ as f64, tn as f64]];
            prop_assert!((phi * phi - chi_squared(&table) / cm.n() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn multiclass_formula_reduces_to_binary((pred, actual) in tables(1)) {
        let cm = confusion(&pred, &actual, 1).unwrap();
        let b = phi_binary(&cm).unwrap();
        let m = phi_multiclass(&cm);
        prop_assert_eq!(b.is_some(), m.is_some());
        if let (Some(b), Some(m)) = (b, m) {
            prop_assert!((b - m).abs() < 1e-12);
        }
    }

    #[test]
    fn multiclass_phi_is_bounded_and_perfect_on_identity((pred, actual) in tables(3)) {
        if let Some(m) = phi_multiclass(&confusion(&pred, &actual, 3).unwrap()) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&m));
        }
        if let Some(m) = phi_multiclass(&confusion(&actual, &actual, 3).unwrap()) {
            prop_assert!((m - 1.0).abs() < 1e-12);
        }
    }
}
