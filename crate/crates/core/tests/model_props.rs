mod common;

use common::*;
use emsched::model::{energy_of_schedule, Schedule};
use emsched::nondivisible::solve_nondivisible;
use emsched::{index_different, index_identical, solve_divisible};
use proptest::prelude::*;

proptest! {
    #[test]
    fn energy_is_linear_in_powers(
        spec in arb_machines(1..=8, true, true),
        work in proptest::collection::vec(decimal(0.0, 50.0), 8),
        c in 0.01f64..50.0,
    ) {
        let fleet = fleet_from(&spec);
        let scaled = fleet.scale_powers(c).unwrap();
        let schedule = Schedule::from_work(&fleet, &work[..fleet.len()]).unwrap();
        let base = energy_of_schedule(&fleet, &schedule).unwrap().total;
        let after = energy_of_schedule(&scaled, &schedule).unwrap().total;
        prop_assert!(rel_close(after, c * base, 1e-12), "{after} vs {}", c * base);
    }

    #[test]
    fn equal_powers_make_energy_proportional_to_makespan(
        powers in proptest::collection::vec((decimal(0.0, 100.0), decimal(1.0, 4.0)), 1..=8),
        work in proptest::collection::vec(decimal(0.0, 50.0), 8),
    ) {
        let spec: Vec<_> = powers.iter().map(|&(p, u)| (p, p, u)).collect();
        let fleet = fleet_from(&spec);
        let schedule = Schedule::from_work(&fleet, &work[..fleet.len()]).unwrap();
        let energy = energy_of_schedule(&fleet, &schedule).unwrap().total;
        let sum_mu: f64 = spec.iter().map(|s| s.0).sum();
        prop_assert!(rel_close(energy, schedule.makespan() * sum_mu, 1e-9));
    }

    #[test]
    fn breakdown_adds_up(
        spec in arb_machines(1..=8, true, true),
        work in proptest::collection::vec(decimal(0.0, 50.0), 8),
    ) {
        let fleet = fleet_from(&spec);
        let schedule = Schedule::from_work(&fleet, &work[..fleet.len()]).unwrap();
        let e = energy_of_schedule(&fleet, &schedule).unwrap();
        prop_assert_eq!(e.working + e.idle, e.total);
        let per: f64 = e.per_machine.iter().map(|p| p.working + p.idle).sum();
        prop_assert!(rel_close(per, e.total, 1e-12));
    }

    #[test]
    fn solvers_conserve_work(
        spec in arb_machines(1..=10, true, false),
        jobs in arb_jobs(1..=30),
        w in decimal(0.0001, 100.0),
    ) {
        let fleet = fleet_from(&spec);
        let ix = index_different(&fleet);
        let d = solve_divisible(&ix, w).unwrap();
        prop_assert!(rel_close(d.schedule.total_work(), w, 1e-9));
        let l = solve_nondivisible(&ix, &jobs).unwrap();
        let total: f64 = jobs.iter().map(|j| j.psi).sum();
        prop_assert!(rel_close(l.schedule.total_work(), total, 1e-9));
        if fleet.has_uniform_speed() {
            let ix = index_identical(&fleet);
            prop_assert!(rel_close(solve_divisible(&ix, w).unwrap().schedule.total_work(), w, 1e-9));
        }
    }
}

#[test]
fn idle_time_is_charged_to_machines_without_work() {
    let fleet = fleet_from(&[(4.0, 1.0, 1.0), (6.0, 2.0, 1.0)]);
    let schedule = Schedule::from_working_times(vec![("m1".into(), 3.0)], 3.0);
    let e = energy_of_schedule(&fleet, &schedule).unwrap();
    assert_eq!(e.working, 12.0);
    assert_eq!(e.idle, 6.0);
    assert_eq!(e.total, 18.0);
}
