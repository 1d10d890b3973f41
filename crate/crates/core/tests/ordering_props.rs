mod common;

use common::*;
use emsched::model::Regime;
use emsched::{
    index_different, index_identical, optimal_r_identical, optimal_working_set_different, Fleet,
};
use proptest::prelude::*;

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn ids(f: &Fleet) -> Vec<String> {
    f.machines().iter().map(|m| m.id.clone()).collect()
}

proptest! {
    #[test]
    fn permutation_is_a_bijection(fleet in arb_fleet(1..=12, true, true)) {
        prop_assert!(is_bijection(index_identical(&fleet).permutation()));
        prop_assert!(is_bijection(index_different(&fleet).permutation()));
    }

    #[test]
    fn permutation_maps_back_to_input(fleet in arb_fleet(1..=12, true, true)) {
        let ix = index_different(&fleet);
        for (new, &old) in ix.permutation().iter().enumerate() {
            prop_assert_eq!(&ix.fleet().machines()[new], &fleet.machines()[old]);
        }
    }

    #[test]
    fn indexing_is_idempotent(fleet in arb_fleet(1..=12, true, true)) {
        let once = index_identical(&fleet);
        let twice = index_identical(once.fleet());
        prop_assert_eq!(ids(once.fleet()), ids(twice.fleet()));
        prop_assert!(twice.permutation().iter().enumerate().all(|(i, &p)| i == p));

        let once = index_different(&fleet);
        let twice = index_different(once.fleet());
        prop_assert_eq!(ids(once.fleet()), ids(twice.fleet()));
        prop_assert!(twice.permutation().iter().enumerate().all(|(i, &p)| i == p));
    }

    #[test]
    fn identical_keys_ascend(fleet in arb_fleet(1..=12, false, true)) {
        let ix = index_identical(&fleet);
        prop_assert!(ix.keys().windows(2).all(|k| k[0] <= k[1]));
    }

    #[test]
    fn different_order_shape(fleet in arb_fleet(1..=12, true, true)) {
        let ix = index_different(&fleet);
        let g = fleet.gamma_total();
        let standalone = |m: &emsched::Machine| (m.net_power() + g) / m.upsilon;
        let first = standalone(&ix.fleet().machines()[0]);
        prop_assert!(fleet.machines().iter().all(|m| first <= standalone(m)));
        prop_assert!(ix.keys()[1..].windows(2).all(|k| k[0] <= k[1]));
    }

    #[test]
    fn different_speed_theory_subsumes_identical(
        fleet in arb_fleet(1..=10, false, true),
        w in decimal(0.0001, 100.0),
    ) {
        let a = optimal_r_identical(&index_identical(&fleet), w).unwrap();
        let forced = fleet.clone().with_regime(Regime::DifferentSpeed).unwrap();
        let b = optimal_working_set_different(&index_different(&forced), w).unwrap();
        prop_assert!(rel_close(a.energy.total, b.energy.total, 1e-9),
            "identical {} vs different {}", a.energy.total, b.energy.total);
    }
}
