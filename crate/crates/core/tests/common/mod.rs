#![allow(dead_code)]

use emsched::model::{energy_of_schedule, validate_fleet, Fleet, Job, Machine, Schedule};
use proptest::prelude::*;

pub fn fleet_from(spec: &[(f64, f64, f64)]) -> Fleet {
    validate_fleet(
        spec.iter()
            .enumerate()
            .map(|(i, &(mu, gamma, ups))| Machine::new(format!("m{}", i + 1), mu, gamma, ups))
            .collect(),
    )
    .unwrap()
}

pub fn jobs_from(psi: &[f64]) -> Vec<Job> {
    psi.iter()
        .enumerate()
        .map(|(i, &p)| Job::new(format!("p{}", i + 1), p))
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Four-decimal value in `[lo, hi]`.
pub fn decimal(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    let (a, b) = ((lo * 1e4).round() as u64, (hi * 1e4).round() as u64);
    (a..=b).prop_map(|k| k as f64 / 1e4)
}

/// Machines with `mu, gamma` in `[0, 100]`; `gamma <= mu` unless `idle_above`.
pub fn arb_machines(
    m: std::ops::RangeInclusive<usize>,
    different_speeds: bool,
    idle_above: bool,
) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    let speed = if different_speeds {
        decimal(1.0, 4.0).boxed()
    } else {
        Just(1.0).boxed()
    };
    let machine = (
        decimal(0.0, 100.0),
        decimal(0.0, 1.0),
        decimal(0.0, 100.0),
        speed,
    )
        .prop_map(move |(mu, frac, free, ups)| {
            let gamma = if idle_above {
                free
            } else {
                (mu * frac * 1e4).round() / 1e4
            };
            (mu, gamma, ups)
        });
    proptest::collection::vec(machine, m)
}

pub fn arb_fleet(
    m: std::ops::RangeInclusive<usize>,
    different_speeds: bool,
    idle_above: bool,
) -> impl Strategy<Value = Fleet> {
    arb_machines(m, different_speeds, idle_above).prop_map(|spec| fleet_from(&spec))
}

pub fn arb_jobs(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Job>> {
    proptest::collection::vec(decimal(1.0, 20.0), n).prop_map(|psi| jobs_from(&psi))
}

/// Energy of running `subset` (fleet positions) for equal time on `work`,
/// computed from an explicit schedule rather than the closed form.
pub fn subset_energy_by_schedule(fleet: &Fleet, subset: &[usize], work: f64) -> f64 {
    let speed: f64 = subset.iter().map(|&i| fleet.machines()[i].upsilon).sum();
    let t = work / speed;
    let mut per_machine = vec![0.0; fleet.len()];
    for &i in subset {
        per_machine[i] = t * fleet.machines()[i].upsilon;
    }
    let schedule = Schedule::from_work(fleet, &per_machine).unwrap();
    energy_of_schedule(fleet, &schedule).unwrap().total
}

/// Minimum makespan of `psi` on machines with the given speeds, by enumeration.
pub fn brute_makespan(psi: &[f64], speeds: &[f64]) -> f64 {
    let m = speeds.len();
    let mut best = f64::INFINITY;
    let mut loads = vec![0.0; m];
    fn walk(psi: &[f64], speeds: &[f64], loads: &mut [f64], best: &mut f64) {
        match psi.split_first() {
            None => {
                let t = loads
                    .iter()
                    .zip(speeds)
                    .map(|(w, u)| w / u)
                    .fold(0.0, f64::max);
                *best = best.min(t);
            }
            Some((&p, rest)) => {
                for i in 0..loads.len() {
                    loads[i] += p;
                    walk(rest, speeds, loads, best);
                    loads[i] -= p;
                }
            }
        }
    }
    walk(psi, speeds, &mut loads, &mut best);
    best
}
