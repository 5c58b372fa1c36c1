//! Properties of open descendent integrals.

use num_bigint::BigInt;
use proptest::prelude::*;

use ogw_localization::descendents::{bracket, closed_form, BracketKey};

fn positive_list() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=3, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_closed_form_in_dimension(a in positive_list()) {
        let sum: u32 = a.iter().sum();
        let k = 2 * sum + 3 - 2 * a.len() as u32;
        prop_assert_eq!(bracket(&BracketKey::new(a.clone(), k)), closed_form(&a));
    }

    #[test]
    fn off_dimension_vanishes(a in positive_list(), shift in 1u32..4) {
        let sum: u32 = a.iter().sum();
        let k = 2 * sum + 3 - 2 * a.len() as u32 + shift;
        prop_assert_eq!(bracket(&BracketKey::new(a, k)), BigInt::from(0));
    }

    #[test]
    fn symmetric_in_insertions(mut a in positive_list()) {
        let sum: u32 = a.iter().sum();
        let k = 2 * sum + 3 - 2 * a.len() as u32;
        let forward = bracket(&BracketKey::new(a.clone(), k));
        a.reverse();
        prop_assert_eq!(bracket(&BracketKey::new(a, k)), forward);
    }

    #[test]
    fn string_equation(a in positive_list()) {
        // <tau_0 prod tau_ai sigma^k> = sum_i <... tau_{ai - 1} ... sigma^k>
        let sum: u32 = a.iter().sum();
        let k = 2 * sum + 1 - 2 * a.len() as u32;
        let mut with_zero = a.clone();
        with_zero.push(0);
        let lhs = bracket(&BracketKey::new(with_zero, k));
        let mut rhs = BigInt::from(0);
        for i in 0..a.len() {
            let mut lowered = a.clone();
            lowered[i] -= 1;
            rhs += bracket(&BracketKey::new(lowered, k));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn base_cases() {
    assert_eq!(bracket(&BracketKey::new(vec![], 3)), BigInt::from(1));
    assert_eq!(bracket(&BracketKey::new(vec![0], 1)), BigInt::from(1));
    assert_eq!(bracket(&BracketKey::new(vec![1], 3)), BigInt::from(2));
    assert_eq!(bracket(&BracketKey::new(vec![2], 5)), BigInt::from(8));
}
