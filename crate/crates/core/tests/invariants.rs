//! End-to-end invariant checks at desk scale: routes, vanishing, homogeneity, Welschinger.

use proptest::prelude::*;

use ogw_localization::algebra::scalar;
use ogw_localization::invariants::{
    compute, ogw, ogw_orbits, ogw_via_diagrams, vanishing_check, welschinger, welschinger_via, InvariantKey, Route,
};
use ogw_localization::selftest::{random_negative_keys, small_keys};
use ogw_localization::wdvv::wdvv_welschinger;

#[test]
fn routes_agree_on_small_keys() {
    for key in small_keys(1, 2, 6) {
        let labeled = ogw(&key).unwrap();
        assert_eq!(ogw_orbits(&key).unwrap().value, labeled.value, "{key}");
        assert_eq!(ogw_via_diagrams(&key).unwrap().value, labeled.value, "{key}");
        assert!(labeled.is_homogeneous_of_expected_degree(), "{key}: {}", labeled.value);
    }
}

#[test]
fn constant_discs_have_positive_degree() {
    let v = ogw(&InvariantKey::new(1, 3, vec![0, 0, 0], 0)).unwrap();
    assert_eq!(v.expected_degree, 4);
    assert_eq!(v.value.to_string(), "-2*l1^2");
    assert!(v.is_homogeneous_of_expected_degree());
}

#[test]
fn random_negative_degree_keys_vanish() {
    for key in random_negative_keys(8, 11).into_iter().filter(|k| k.m <= 2) {
        assert!(vanishing_check(&key).unwrap(), "{key}");
    }
}

#[test]
fn vanishing_check_rejects_nonnegative_degree() {
    assert!(vanishing_check(&InvariantKey::new(1, 2, vec![0, 0, 0], 1)).is_err());
}

#[test]
fn welschinger_through_every_route_at_low_degree() {
    for (k, l) in [(2, 0), (0, 1), (5, 0), (3, 1), (1, 2), (8, 0), (4, 2)] {
        let oracle = scalar::int(wdvv_welschinger(k, l).unwrap().try_into().unwrap());
        assert_eq!(welschinger(k, l).unwrap(), oracle, "W({k},{l})");
        for route in [Route::Labeled, Route::Orbits] {
            assert_eq!(welschinger_via(k, l, route).unwrap(), oracle, "W({k},{l}) via {route}");
        }
    }
}

#[test]
fn invalid_keys_are_reported() {
    let e = compute(&InvariantKey::new(1, 2, vec![0, 0, 0], 2), Route::Orbits).unwrap_err();
    assert!(e.is_invalid_key());
    assert!(welschinger(3, 0).unwrap_err().is_invalid_key());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn m1_values_are_homogeneous(k in 0u32..5, l0 in 0u32..2, l2 in 0u32..2, beta in 0u32..3) {
        let key = InvariantKey::new(1, k, vec![l0, 0, l2], beta);
        prop_assume!(key.validate().is_ok());
        let v = ogw_orbits(&key).unwrap();
        prop_assert!(v.is_homogeneous_of_expected_degree(), "{}: {}", key, v.value);
        if key.expected_degree() < 0 {
            prop_assert!(v.is_zero());
        }
    }
}
