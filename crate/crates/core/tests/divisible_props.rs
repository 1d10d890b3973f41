mod common;

use common::*;
use emsched::divisible::{admission_gain_identical, optimal_r_identical_with, RSearch};
use emsched::model::{energy_of_schedule, Regime, Schedule};
use emsched::oracle::{oracle_divisible, OracleConfig};
use emsched::ordering::IndexedFleet;
use emsched::{
    index_different, index_identical, optimal_r_identical, optimal_working_set_different,
    solve_divisible, working_energy_ratio,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn identical_solver_matches_subset_oracle(
        fleet in arb_fleet(1..=10, false, true),
        w in decimal(0.0001, 100.0),
    ) {
        let solved = optimal_r_identical(&index_identical(&fleet), w).unwrap();
        let oracle = oracle_divisible(&fleet, w).unwrap();
        prop_assert!(rel_close(solved.energy.total, oracle.best_energy, 1e-9),
            "solver {} oracle {}", solved.energy.total, oracle.best_energy);
    }

    #[test]
    fn subset_oracle_matches_explicit_schedules(
        fleet in arb_fleet(1..=6, true, true),
        w in decimal(0.0001, 100.0),
    ) {
        let oracle = oracle_divisible(&fleet, w).unwrap();
        let m = fleet.len();
        let mut best = f64::INFINITY;
        for mask in 1u64..(1 << m) {
            let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            best = best.min(subset_energy_by_schedule(&fleet, &subset, w));
        }
        prop_assert!(rel_close(oracle.best_energy, best, 1e-9));
        let OracleConfig::Subset(mask) = oracle.best_config else { unreachable!() };
        let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        prop_assert!(rel_close(subset_energy_by_schedule(&fleet, &subset, w), best, 1e-9));
    }

    #[test]
    fn greedy_is_best_prefix(
        fleet in arb_fleet(1..=12, true, true),
        w in decimal(0.0001, 100.0),
    ) {
        let ix = index_different(&fleet);
        let solved = optimal_working_set_different(&ix, w).unwrap();
        let chosen = ix.prefix_energy(solved.r, w);
        for r in 1..=ix.len() {
            prop_assert!(chosen <= ix.prefix_energy(r, w) * (1.0 + 1e-12),
                "prefix {} beats greedy {}", r, solved.r);
        }
        prop_assert!(rel_close(solved.energy.total, chosen, 1e-9));
    }

    #[test]
    fn different_solver_matches_oracle_or_pattern_holds(
        fleet in arb_fleet(1..=9, true, false),
        w in decimal(0.0001, 100.0),
    ) {
        let check = emsched::oracle::cross_check_different(&fleet, w).unwrap();
        if !check.agrees(1e-9) {
            prop_assert!(check.oracle_prefix.is_none());
            prop_assert!(check.witness.is_some(), "mismatch without witness: {check:?}");
        }
    }

    #[test]
    fn binary_search_agrees_with_scan(
        fleet in arb_fleet(1..=40, false, true),
        w in decimal(0.0001, 100.0),
    ) {
        let ix = index_identical(&fleet);
        let scan = optimal_r_identical_with(&ix, w, RSearch::LinearScan).unwrap();
        let bisect = optimal_r_identical_with(&ix, w, RSearch::BinarySearch).unwrap();
        prop_assert!(rel_close(scan.energy.total, bisect.energy.total, 1e-9));
    }

    #[test]
    fn working_machines_share_the_makespan(
        fleet in arb_fleet(1..=12, true, true),
        w in decimal(0.0001, 100.0),
    ) {
        let ix = index_different(&fleet);
        let s = solve_divisible(&ix, w).unwrap();
        for (i, load) in s.schedule.loads().iter().enumerate() {
            if i < s.r {
                prop_assert!(rel_close(load.working_time, s.makespan, 1e-9));
            } else {
                prop_assert_eq!(load.working_time, 0.0);
            }
        }
    }

    #[test]
    fn decisions_ignore_power_scale_and_work_amount(
        fleet in arb_fleet(1..=10, true, true),
        w in decimal(0.0001, 100.0),
        c in 0.1f64..20.0,
    ) {
        let base = solve_divisible(&index_different(&fleet), w).unwrap();
        let scaled = solve_divisible(&index_different(&fleet.scale_powers(c).unwrap()), w).unwrap();
        prop_assert_eq!(&base.working_set, &scaled.working_set);
        let more = solve_divisible(&index_different(&fleet), w * c).unwrap();
        prop_assert_eq!(base.r, more.r);
    }

    #[test]
    fn ratio_is_monotone_and_ends_at_one(
        spec in arb_machines(1..=12, true, true),
    ) {
        let spec: Vec<_> = spec.into_iter().map(|(mu, g, u)| (mu.max(0.0001), g, u)).collect();
        let fleet = fleet_from(&spec);
        for ix in [index_identical(&fleet), index_different(&fleet)] {
            let ratios: Vec<f64> = (1..=ix.len())
                .map(|r| working_energy_ratio(&ix, r).unwrap())
                .collect();
            prop_assert!(ratios.windows(2).all(|p| p[0] <= p[1] * (1.0 + 1e-12)), "{ratios:?}");
            prop_assert_eq!(*ratios.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn admission_gain_is_an_energy_difference(
        spec in arb_machines(2..=8, false, true),
        r_pick in 0usize..100,
        t in decimal(1.0, 50.0),
        share in 0.0f64..1.0,
    ) {
        let fleet = fleet_from(&spec);
        let ix = IndexedFleet::as_given(&fleet, Regime::IdenticalSpeed);
        let m = fleet.len();
        let r = 2 + r_pick % (m - 1);
        // every earlier machine hands over s, which must still fit before the new makespan
        let s = share * t / r as f64;
        let before: Vec<(String, f64)> = fleet.machines()[..r - 1]
            .iter()
            .map(|mc| (mc.id.clone(), t))
            .collect();
        let mut after: Vec<(String, f64)> = fleet.machines()[..r - 1]
            .iter()
            .map(|mc| (mc.id.clone(), t - s))
            .collect();
        after.push((fleet.machines()[r - 1].id.clone(), (r - 1) as f64 * s));
        let e_before = energy_of_schedule(&fleet, &Schedule::from_working_times(before, t)).unwrap();
        let e_after = energy_of_schedule(&fleet, &Schedule::from_working_times(after, t - s)).unwrap();
        let gain = admission_gain_identical(&ix, r, &vec![s; r - 1]).unwrap();
        let diff = e_before.total - e_after.total;
        prop_assert!((gain - diff).abs() <= 1e-9 * e_before.total.max(1.0), "{gain} vs {diff}");
    }
}

#[test]
fn single_machine_fleets_use_that_machine() {
    let fleet = fleet_from(&[(5.0, 2.0, 2.0)]);
    for ix in [index_identical(&fleet), index_different(&fleet)] {
        let s = solve_divisible(&ix, 8.0).unwrap();
        assert_eq!(s.r, 1);
        assert_eq!(s.makespan, 4.0);
        assert_eq!(s.energy.total, 20.0);
    }
}
