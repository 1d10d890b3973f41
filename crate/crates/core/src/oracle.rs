//! Brute-force ground truth for small instances.
//!
//! [`oracle_divisible`] scores every non-empty machine subset with the
//! equal-time closed form; [`oracle_nondivisible`] tries every assignment of
//! jobs to machines. Enumeration order is fixed (bitmasks ascending,
//! assignments in mixed-radix order with job 0 most significant) and a
//! candidate replaces the incumbent only when its energy is strictly lower, so
//! ties resolve to the smallest configuration. Parallel runs split the same
//! sequence into contiguous chunks and reduce them in order.

use std::num::NonZeroUsize;

use crate::divisible::{admits, solve_divisible};
use crate::error::{Error, Result};
use crate::model::{total_work, Fleet, Job};
use crate::ordering::{index_different, IndexedFleet};

/// Largest fleet [`oracle_divisible`] accepts.
pub const MAX_SUBSET_MACHINES: usize = 20;
/// Largest number of assignments [`oracle_nondivisible`] enumerates.
pub const MAX_ASSIGNMENTS: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleConfig {
    /// Bit `i` set when fleet position `i` works.
    Subset(u64),
    /// Fleet position of each job.
    Assignment(Vec<usize>),
}

impl OracleConfig {
    pub fn subset_members(&self) -> Option<Vec<usize>> {
        match self {
            OracleConfig::Subset(mask) => Some((0..64).filter(|i| mask >> i & 1 == 1).collect()),
            OracleConfig::Assignment(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_energy: f64,
    pub best_makespan: f64,
    pub best_config: OracleConfig,
    pub explored: u64,
}

fn worker_count(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, NonZeroUsize::get)
    }
}

fn subset_energy(fleet: &Fleet, mask: u64, work: f64) -> (f64, f64) {
    let (mut net, mut speed) = (0.0, 0.0);
    for (i, m) in fleet.machines().iter().enumerate() {
        if mask >> i & 1 == 1 {
            net += m.net_power();
            speed += m.upsilon;
        }
    }
    (work * ((net + fleet.gamma_total()) / speed), work / speed)
}

/// (energy, makespan, mask) of the best subset in `lo..hi`.
fn best_subset_in(fleet: &Fleet, work: f64, lo: u64, hi: u64) -> Option<(f64, f64, u64)> {
    let mut best: Option<(f64, f64, u64)> = None;
    for mask in lo..hi {
        let (energy, makespan) = subset_energy(fleet, mask, work);
        if best.is_none_or(|(e, _, _)| energy < e) {
            best = Some((energy, makespan, mask));
        }
    }
    best
}

/// Minimum-energy working subset for divisible work `work`.
pub fn oracle_divisible(fleet: &Fleet, work: f64) -> Result<OracleResult> {
    oracle_divisible_with(fleet, work, 1)
}

/// [`oracle_divisible`] over `workers` threads; 0 picks the available parallelism.
pub fn oracle_divisible_with(fleet: &Fleet, work: f64, workers: usize) -> Result<OracleResult> {
    let m = fleet.len();
    if m > MAX_SUBSET_MACHINES {
        return Err(Error::FleetTooLarge {
            m,
            limit: MAX_SUBSET_MACHINES,
        });
    }
    if !(work.is_finite() && work >= 0.0) {
        return Err(Error::InvalidWork(work));
    }
    let end = 1u64 << m;
    let workers = worker_count(workers).min(end as usize - 1).max(1);
    let best = if workers == 1 {
        best_subset_in(fleet, work, 1, end)
    } else {
        let span = (end - 1).div_ceil(workers as u64);
        let chunks: Vec<Option<(f64, f64, u64)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let lo = 1 + w * span;
                    let hi = (lo + span).min(end);
                    s.spawn(move || best_subset_in(fleet, work, lo.min(end), hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        chunks.into_iter().flatten().fold(None, |acc, c| match acc {
            Some((e, _, _)) if c.0 >= e => acc,
            _ => Some(c),
        })
    };
    let (best_energy, best_makespan, mask) = best.ok_or(Error::EmptyFleet)?;
    Ok(OracleResult {
        best_energy,
        best_makespan,
        best_config: OracleConfig::Subset(mask),
        explored: end - 1,
    })
}

struct Enumeration<'a> {
    fleet: &'a Fleet,
    psi: Vec<f64>,
    machines: usize,
    best_energy: f64,
    best_makespan: f64,
    best: Vec<usize>,
    current: Vec<usize>,
    /// `loads[d]` holds the per-machine work after jobs `0..d` are placed.
    loads: Vec<Vec<f64>>,
    found: bool,
}

impl<'a> Enumeration<'a> {
    fn new(fleet: &'a Fleet, jobs: &[Job], machines: usize) -> Self {
        let n = jobs.len();
        Enumeration {
            fleet,
            psi: jobs.iter().map(|j| j.psi).collect(),
            machines,
            best_energy: f64::INFINITY,
            best_makespan: f64::INFINITY,
            best: vec![0; n],
            current: vec![0; n],
            loads: vec![vec![0.0; fleet.len()]; n + 1],
            found: false,
        }
    }

    fn run_from(&mut self, prefix: &[usize]) {
        for (d, &pos) in prefix.iter().enumerate() {
            self.current[d] = pos;
            let (done, rest) = self.loads.split_at_mut(d + 1);
            rest[0].copy_from_slice(&done[d]);
            rest[0][pos] += self.psi[d];
        }
        self.descend(prefix.len());
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.psi.len() {
            self.score();
            return;
        }
        for pos in 0..self.machines {
            self.current[depth] = pos;
            let (done, rest) = self.loads.split_at_mut(depth + 1);
            rest[0].copy_from_slice(&done[depth]);
            rest[0][pos] += self.psi[depth];
            self.descend(depth + 1);
        }
    }

    fn score(&mut self) {
        let loads = &self.loads[self.psi.len()];
        let machines = self.fleet.machines();
        let mut makespan: f64 = 0.0;
        for (w, m) in loads.iter().zip(machines) {
            makespan = makespan.max(w / m.upsilon);
        }
        let (mut working, mut idle) = (0.0, 0.0);
        for (w, m) in loads.iter().zip(machines) {
            let tau = w / m.upsilon;
            working += m.mu * tau;
            idle += m.gamma * (makespan - tau);
        }
        let energy = working + idle;
        if !self.found || energy < self.best_energy {
            self.found = true;
            self.best_energy = energy;
            self.best_makespan = makespan;
            self.best.copy_from_slice(&self.current);
        }
    }
}

/// Minimum-energy assignment of indivisible jobs. Only the first
/// `machine_limit` fleet positions receive jobs when a limit is given; every
/// machine still idles for the makespan.
pub fn oracle_nondivisible(
    fleet: &Fleet,
    jobs: &[Job],
    machine_limit: Option<usize>,
) -> Result<OracleResult> {
    oracle_nondivisible_with(fleet, jobs, machine_limit, 1)
}

/// [`oracle_nondivisible`] over `workers` threads; 0 picks the available parallelism.
pub fn oracle_nondivisible_with(
    fleet: &Fleet,
    jobs: &[Job],
    machine_limit: Option<usize>,
    workers: usize,
) -> Result<OracleResult> {
    total_work(jobs)?;
    let m = fleet.len();
    let r = machine_limit.unwrap_or(m);
    if r == 0 || r > m {
        return Err(Error::ROutOfRange { r, m });
    }
    let n = jobs.len();
    let configurations = (r as f64).powi(n as i32);
    if configurations > MAX_ASSIGNMENTS {
        return Err(Error::InstanceTooLarge {
            configurations,
            limit: MAX_ASSIGNMENTS,
        });
    }
    let explored = (r as u64).pow(n as u32);

    // contiguous chunks of the enumeration, keyed by their leading jobs
    let mut depth = 0;
    let mut prefixes = 1usize;
    let workers = worker_count(workers);
    while workers > 1 && prefixes < workers * 4 && depth < n {
        depth += 1;
        prefixes *= r;
    }
    let prefix_of = |mut code: usize| {
        let mut p = vec![0; depth];
        for slot in p.iter_mut().rev() {
            *slot = code % r;
            code /= r;
        }
        p
    };

    let run = |codes: std::ops::Range<usize>| {
        let mut best: Option<(f64, f64, Vec<usize>)> = None;
        let mut e = Enumeration::new(fleet, jobs, r);
        for code in codes {
            e.found = false;
            e.run_from(&prefix_of(code));
            if best.as_ref().is_none_or(|b| e.best_energy < b.0) {
                best = Some((e.best_energy, e.best_makespan, e.best.clone()));
            }
        }
        best
    };

    let best = if workers == 1 || prefixes == 1 {
        run(0..prefixes)
    } else {
        let span = prefixes.div_ceil(workers);
        let chunks: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = (w * span).min(prefixes);
                    let hi = (lo + span).min(prefixes);
                    let run = &run;
                    s.spawn(move || run(lo..hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        chunks
            .into_iter()
            .flatten()
            .fold(None::<(f64, f64, Vec<usize>)>, |acc, c| match acc {
                Some(ref b) if c.0 >= b.0 => acc,
                _ => Some(c),
            })
    };
    let (best_energy, best_makespan, assignment) = best.ok_or(Error::NoJobs)?;
    Ok(OracleResult {
        best_energy,
        best_makespan,
        best_config: OracleConfig::Assignment(assignment),
        explored,
    })
}

/// A pair of machines showing that admission by ratio can skip a machine the
/// optimum needs: both pass the admission test against the working prefix of
/// length `step`, `slower` has the smaller ratio, yet `faster` gives the lower
/// energy when added. Positions refer to the indexed order.
#[derive(Debug, Clone, PartialEq)]
pub struct RareCaseWitness {
    pub step: usize,
    pub slower: usize,
    pub faster: usize,
    pub slower_ratio: f64,
    pub faster_ratio: f64,
    /// Energy per unit of work with each candidate added to the prefix.
    pub slower_energy: f64,
    pub faster_energy: f64,
}

/// Searches prefixes of length `0..=r` for a [`RareCaseWitness`].
pub fn rare_case_witness(indexed: &IndexedFleet, r: usize) -> Option<RareCaseWitness> {
    let machines = indexed.fleet().machines();
    let gamma_total = indexed.fleet().gamma_total();
    for step in 0..=r.min(machines.len()) {
        let net = indexed.net_prefix(step) + gamma_total;
        let speed = indexed.speed_prefix(step);
        let admissible: Vec<usize> = (step..machines.len())
            .filter(|&i| step == 0 || admits(net / speed, machines[i].net_power_per_speed()))
            .collect();
        for &j in &admissible {
            for &k in &admissible {
                let (mj, mk) = (&machines[j], &machines[k]);
                let (rj, rk) = (mj.net_power_per_speed(), mk.net_power_per_speed());
                if !(rj < rk && mj.upsilon < mk.upsilon) {
                    continue;
                }
                let ej = (net + mj.net_power()) / (speed + mj.upsilon);
                let ek = (net + mk.net_power()) / (speed + mk.upsilon);
                if ek < ej {
                    return Some(RareCaseWitness {
                        step,
                        slower: j,
                        faster: k,
                        slower_ratio: rj,
                        faster_ratio: rk,
                        slower_energy: ej,
                        faster_energy: ek,
                    });
                }
            }
        }
    }
    None
}

/// Solver against oracle on one divisible instance.
#[derive(Debug, Clone)]
pub struct DivisibleCrossCheck {
    pub indexed: IndexedFleet,
    pub solver_r: usize,
    /// Closed-form energy of the solver's prefix.
    pub solver_energy: f64,
    pub best_prefix_r: usize,
    pub best_prefix_energy: f64,
    /// Oracle over the indexed fleet, so bit `i` is indexed position `i`.
    pub oracle: OracleResult,
    /// Length of the prefix the oracle picked, if it picked a prefix.
    pub oracle_prefix: Option<usize>,
    pub witness: Option<RareCaseWitness>,
}

impl DivisibleCrossCheck {
    /// Solver energy matches the oracle within relative `tolerance`.
    pub fn agrees(&self, tolerance: f64) -> bool {
        (self.solver_energy - self.oracle.best_energy).abs()
            <= tolerance * self.oracle.best_energy.abs().max(f64::MIN_POSITIVE)
    }
}

/// Runs the divisible solver for the indexed ordering and compares it with
/// the best prefix and with the full subset enumeration.
pub fn cross_check_divisible(indexed: &IndexedFleet, work: f64) -> Result<DivisibleCrossCheck> {
    let solution = solve_divisible(indexed, work)?;
    let m = indexed.len();
    let (mut best_prefix_r, mut best_prefix_energy) = (1, indexed.prefix_energy(1, work));
    for r in 2..=m {
        let e = indexed.prefix_energy(r, work);
        if e < best_prefix_energy {
            best_prefix_r = r;
            best_prefix_energy = e;
        }
    }
    let oracle = oracle_divisible(indexed.fleet(), work)?;
    let oracle_prefix = match oracle.best_config {
        OracleConfig::Subset(mask) if (mask + 1).is_power_of_two() => {
            Some(mask.trailing_ones() as usize)
        }
        _ => None,
    };
    let witness = match oracle_prefix {
        Some(_) => None,
        None => rare_case_witness(indexed, solution.r),
    };
    Ok(DivisibleCrossCheck {
        indexed: indexed.clone(),
        solver_r: solution.r,
        solver_energy: indexed.prefix_energy(solution.r, work),
        best_prefix_r,
        best_prefix_energy,
        oracle,
        oracle_prefix,
        witness,
    })
}

/// [`cross_check_divisible`] with the different-speed ordering.
pub fn cross_check_different(fleet: &Fleet, work: f64) -> Result<DivisibleCrossCheck> {
    cross_check_divisible(&index_different(fleet), work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{energy_of_schedule, validate_fleet, Machine, Schedule};

    fn fleet(spec: &[(f64, f64, f64)]) -> Fleet {
        validate_fleet(
            spec.iter()
                .enumerate()
                .map(|(i, &(mu, gamma, ups))| Machine::new(format!("m{}", i + 1), mu, gamma, ups))
                .collect(),
        )
        .unwrap()
    }

    fn jobs(psi: &[f64]) -> Vec<Job> {
        psi.iter()
            .enumerate()
            .map(|(i, &p)| Job::new(format!("p{}", i + 1), p))
            .collect()
    }

    #[test]
    fn divisible_two_machine_enumeration() {
        let f = fleet(&[(10.0, 0.0, 1.0), (10.0, 9.0, 1.0)]);
        let out = oracle_divisible(&f, 10.0).unwrap();
        // subsets {1}, {2}, {1,2} cost 190, 100, 100; the smaller mask wins the tie
        assert_eq!(out.best_config, OracleConfig::Subset(0b10));
        assert_eq!(out.best_energy, 100.0);
        assert_eq!(out.best_makespan, 10.0);
        assert_eq!(out.explored, 3);
        assert_eq!(out.best_config.subset_members(), Some(vec![1]));
    }

    #[test]
    fn divisible_single_machine() {
        let f = fleet(&[(7.0, 2.0, 2.0)]);
        let out = oracle_divisible(&f, 4.0).unwrap();
        assert_eq!(out.best_config, OracleConfig::Subset(1));
        assert_eq!(out.best_energy, 4.0 * (5.0 + 2.0) / 2.0);
    }

    #[test]
    fn divisible_tie_takes_smallest_mask() {
        let f = fleet(&[(6.0, 0.0, 1.5), (6.0, 0.0, 1.5)]);
        let out = oracle_divisible(&f, 3.0).unwrap();
        assert_eq!(out.best_config, OracleConfig::Subset(0b01));
        assert_eq!(out.best_energy, 12.0);
    }

    #[test]
    fn divisible_guard() {
        let f = validate_fleet(
            (0..21)
                .map(|i| Machine::new(format!("m{i}"), 1.0, 0.5, 1.0))
                .collect(),
        )
        .unwrap();
        assert_eq!(
            oracle_divisible(&f, 1.0).unwrap_err(),
            Error::FleetTooLarge { m: 21, limit: 20 }
        );
        assert!(oracle_divisible(&fleet(&[(1.0, 0.0, 1.0)]), -1.0).is_err());
    }

    #[test]
    fn divisible_parallel_matches_sequential() {
        let f = fleet(&[
            (5.0, 5.0, 1.0),
            (5.0, 5.0, 1.0),
            (3.0, 1.0, 2.0),
            (9.0, 0.5, 3.0),
            (5.0, 5.0, 1.0),
            (4.0, 2.0, 1.0),
            (4.0, 2.0, 1.0),
        ]);
        let seq = oracle_divisible(&f, 17.0).unwrap();
        for workers in [2, 3, 5, 8, 200] {
            assert_eq!(oracle_divisible_with(&f, 17.0, workers).unwrap(), seq);
        }
    }

    #[test]
    fn nondivisible_single_job_picks_cheapest_alone() {
        let f = fleet(&[(4.0, 1.0, 1.0), (9.0, 1.0, 4.0), (3.0, 2.0, 0.5)]);
        let out = oracle_nondivisible(&f, &jobs(&[6.0]), None).unwrap();
        let g = f.gamma_total();
        let best = (0..3)
            .min_by(|&a, &b| {
                let key = |i: usize| {
                    let m = &f.machines()[i];
                    (m.net_power() + g) / m.upsilon
                };
                key(a).total_cmp(&key(b))
            })
            .unwrap();
        assert_eq!(out.best_config, OracleConfig::Assignment(vec![best]));
        assert_eq!(out.explored, 3);
        let m = &f.machines()[best];
        assert!((out.best_energy - 6.0 * (m.net_power() + g) / m.upsilon).abs() < 1e-12);
    }

    #[test]
    fn nondivisible_partition_instance() {
        // without idle power every assignment costs the same work-only energy
        let f = fleet(&[(1.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
        let js = jobs(&[3., 3., 2., 2., 2.]);
        let out = oracle_nondivisible(&f, &js, None).unwrap();
        assert_eq!(out.best_energy, 12.0);
        assert_eq!(out.explored, 32);
        assert_eq!(out.best_config, OracleConfig::Assignment(vec![0; 5]));

        // idle power makes energy proportional to makespan
        let f = fleet(&[(1.0, 1.0, 1.0), (1.0, 1.0, 1.0)]);
        let out = oracle_nondivisible(&f, &js, None).unwrap();
        assert_eq!(out.best_makespan, 6.0);
        assert_eq!(out.best_energy, 12.0);
        assert_eq!(
            out.best_config,
            OracleConfig::Assignment(vec![0, 0, 1, 1, 1])
        );
    }

    #[test]
    fn nondivisible_forced_assignment() {
        let f = fleet(&[(5.0, 1.0, 2.0)]);
        let out = oracle_nondivisible(&f, &jobs(&[3.0]), None).unwrap();
        assert_eq!(out.best_energy, 3.0 * 5.0 / 2.0);
    }

    #[test]
    fn nondivisible_energy_matches_schedule_accounting() {
        let f = fleet(&[(3.0, 1.0, 1.0), (8.0, 0.5, 2.5), (2.0, 1.5, 0.7)]);
        let js = jobs(&[2.3, 1.1, 4.7, 0.9, 3.3]);
        let out = oracle_nondivisible(&f, &js, None).unwrap();
        let OracleConfig::Assignment(assignment) = &out.best_config else {
            panic!("assignment expected");
        };
        let schedule = Schedule::from_assignment(&f, &js, assignment).unwrap();
        let energy = energy_of_schedule(&f, &schedule).unwrap();
        assert_eq!(energy.total, out.best_energy);
        assert_eq!(schedule.makespan(), out.best_makespan);
    }

    #[test]
    fn nondivisible_machine_limit() {
        let f = fleet(&[(1.0, 1.0, 1.0), (1.0, 1.0, 1.0), (1.0, 1.0, 1.0)]);
        let js = jobs(&[1.0, 1.0, 1.0]);
        let limited = oracle_nondivisible(&f, &js, Some(2)).unwrap();
        assert_eq!(limited.explored, 8);
        assert_eq!(limited.best_makespan, 2.0);
        // the third machine idles over the makespan as well
        assert_eq!(limited.best_energy, 6.0);
        let full = oracle_nondivisible(&f, &js, None).unwrap();
        assert_eq!(full.best_energy, 3.0);
        assert!(oracle_nondivisible(&f, &js, Some(4)).is_err());
        assert!(oracle_nondivisible(&f, &js, Some(0)).is_err());
    }

    #[test]
    fn nondivisible_guard() {
        let f = fleet(&[(1.0, 0.0, 1.0); 10]);
        let js = jobs(&[1.0; 9]);
        match oracle_nondivisible(&f, &js, None).unwrap_err() {
            Error::InstanceTooLarge { configurations, .. } => assert_eq!(configurations, 1e9),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            oracle_nondivisible(&f, &[], None).unwrap_err(),
            Error::NoJobs
        );
    }

    #[test]
    fn nondivisible_parallel_matches_sequential() {
        let f = fleet(&[(2.0, 2.0, 1.0), (2.0, 2.0, 1.0), (3.0, 1.0, 1.5)]);
        let js = jobs(&[2.0, 2.0, 1.0, 1.0, 3.0, 1.0, 2.0]);
        let seq = oracle_nondivisible(&f, &js, None).unwrap();
        for workers in [2, 3, 4, 7, 64] {
            assert_eq!(
                oracle_nondivisible_with(&f, &js, None, workers).unwrap(),
                seq
            );
        }
    }

    #[test]
    fn cross_check_prefix_optimum() {
        let f = fleet(&[(10.0, 0.0, 1.0), (10.0, 0.0, 2.0), (6.0, 1.0, 1.0)]);
        let check = cross_check_different(&f, 12.0).unwrap();
        assert_eq!(check.solver_r, check.best_prefix_r);
        assert_eq!(check.solver_energy, check.best_prefix_energy);
        assert_eq!(check.oracle_prefix, Some(check.solver_r));
        assert!(check.agrees(0.0));
        assert!(check.witness.is_none());
    }

    #[test]
    fn cross_check_first_position_outside_optimum() {
        // the fast machine is cheapest alone, but the slow pair does better without it
        let f = fleet(&[(1.0, 1.0, 1.0), (1.0, 1.0, 1.0), (3.0, 0.0, 2.6)]);
        let check = cross_check_different(&f, 5.0).unwrap();
        let ids: Vec<&str> = check
            .indexed
            .fleet()
            .machines()
            .iter()
            .map(|m| m.id.as_str())
            .collect();
        assert_eq!(ids, vec!["m3", "m1", "m2"]);
        assert_eq!(check.oracle.best_config, OracleConfig::Subset(0b110));
        assert_eq!(check.oracle_prefix, None);
        assert!(check.solver_energy > check.oracle.best_energy);
        let witness = check.witness.expect("premise holds");
        assert_eq!(witness.step, 0);
        assert_eq!((witness.slower, witness.faster), (1, 0));
        assert!(witness.slower_ratio < witness.faster_ratio);
        assert!(witness.faster_energy < witness.slower_energy);
    }
}
