//! LPT-style approximation for indivisible jobs.
//!
//! The divisible optimum gives a makespan `T` that indivisible jobs may not
//! reach. The ideal target raises it to what the longest job allows, `T_o`,
//! and shrinks the working prefix to `r_o` machines accordingly. Jobs are then
//! spread over those `r_o` machines longest-first:
//!
//! * identical speeds: each job joins the lightest bucket; the heaviest bucket
//!   goes to the first indexed machine, and so on;
//! * different speeds: each job goes to the machine on which it would finish
//!   first.
//!
//! Both return a [`BoundCertificate`] carrying the energy ratio limit that
//! follows from the classical LPT makespan bounds.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::divisible::{optimal_r_identical, optimal_working_set_different};
use crate::error::{Error, Result};
use crate::model::{self, energy_of_schedule, EnergyBreakdown, Job, Regime, Schedule};
use crate::ordering::IndexedFleet;
use crate::tol;

/// Asymptotic worst case of LPT makespan on uniform machines, `1 + sqrt(3)/3`.
pub const LPT_UNIFORM_ASYMPTOTIC: f64 = 1.577_350_269_189_625_8;

/// Best achievable makespan and the working-machine count that goes with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealTarget {
    pub t_o: f64,
    pub r_o: usize,
    /// Makespan of the divisible optimum the target was raised from.
    pub divisible_makespan: f64,
}

impl IdealTarget {
    /// `T_o = max(T, psi_max)`, `r_o = ceil(W / T_o)` clamped to `1..=m`.
    pub fn identical(divisible_makespan: f64, psi_max: f64, total_work: f64, m: usize) -> Self {
        let t_o = divisible_makespan.max(psi_max);
        let r_o = if t_o > 0.0 {
            let q = total_work / t_o;
            // W / T_o lands a hair above an integer when T_o = W / r
            let snapped = q.round();
            let q = if tol::approx_eq(q, snapped) {
                snapped
            } else {
                q
            };
            q.ceil() as usize
        } else {
            1
        };
        IdealTarget {
            t_o,
            r_o: r_o.clamp(1, m.max(1)),
            divisible_makespan,
        }
    }

    /// `T_o = max(T, psi_max / upsilon_max)`; `r_o` is the smallest prefix
    /// whose speeds finish `W` within `T_o`. `speeds` is in indexed order.
    pub fn different(
        divisible_makespan: f64,
        psi_max: f64,
        fastest: f64,
        total_work: f64,
        speeds: &[f64],
    ) -> Self {
        let t_o = divisible_makespan.max(psi_max / fastest);
        let mut sum = 0.0;
        let mut r_o = speeds.len();
        for (i, &u) in speeds.iter().enumerate() {
            sum += u;
            if tol::less_or_close(total_work / sum, t_o) {
                r_o = i + 1;
                break;
            }
        }
        IdealTarget {
            t_o,
            r_o: r_o.max(1),
            divisible_makespan,
        }
    }
}

fn psi_max(jobs: &[Job]) -> f64 {
    jobs.iter().map(|j| j.psi).fold(0.0, f64::max)
}

pub fn ideal_target_identical(indexed: &IndexedFleet, jobs: &[Job]) -> Result<IdealTarget> {
    let work = model::total_work(jobs)?;
    let divisible = optimal_r_identical(indexed, work)?;
    Ok(IdealTarget::identical(
        divisible.makespan,
        psi_max(jobs),
        work,
        indexed.len(),
    ))
}

pub fn ideal_target_different(indexed: &IndexedFleet, jobs: &[Job]) -> Result<IdealTarget> {
    let work = model::total_work(jobs)?;
    let divisible = optimal_working_set_different(indexed, work)?;
    let speeds: Vec<f64> = indexed
        .fleet()
        .machines()
        .iter()
        .map(|m| m.upsilon)
        .collect();
    Ok(IdealTarget::different(
        divisible.makespan,
        psi_max(jobs),
        indexed.fleet().fastest_speed(),
        work,
        &speeds,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `1 + Γ (4/3 - 1/(3 r_o) - 1) / (Σ_{i<=r_o} (mu - gamma) + Γ)`.
    IdenticalEqB1,
    /// `2 r_o / (r_o + 1)`.
    Different2R,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::IdenticalEqB1 => "identical_eq_b1",
            BoundKind::Different2R => "different_2r",
        }
    }
}

/// Claimed worst-case ratio between the heuristic's energy and the ideal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub r_o: usize,
    pub ratio_limit: f64,
    /// LPT makespan ratio the energy limit is derived from.
    pub makespan_limit: f64,
    /// Asymptotic constant, when a tighter one is known.
    pub asymptotic_limit: Option<f64>,
    /// Heuristic energy over the exact optimum, when an oracle was run.
    pub achieved_ratio: Option<f64>,
}

impl BoundCertificate {
    pub fn with_achieved(mut self, heuristic_energy: f64, optimal_energy: f64) -> Self {
        self.achieved_ratio = Some(if optimal_energy > 0.0 {
            heuristic_energy / optimal_energy
        } else {
            1.0
        });
        self
    }

    /// The achieved ratio, if known, is within `ratio_limit + 1e-9`.
    pub fn holds(&self) -> Option<bool> {
        self.achieved_ratio.map(|a| a <= self.ratio_limit + 1e-9)
    }
}

/// `(r_o - 1) / (3 r_o)`, i.e. `4/3 - 1/(3 r_o) - 1`, with a single rounding.
fn lpt_identical_slack(r_o: usize) -> f64 {
    (r_o as f64 - 1.0) / (3.0 * r_o as f64)
}

pub fn energy_bound_identical(indexed: &IndexedFleet, r_o: usize) -> Result<BoundCertificate> {
    let m = indexed.len();
    if r_o == 0 || r_o > m {
        return Err(Error::ROutOfRange { r: r_o, m });
    }
    let gamma_total = indexed.fleet().gamma_total();
    let slack = lpt_identical_slack(r_o);
    let ratio_limit = if gamma_total == 0.0 {
        1.0
    } else {
        1.0 + slack * (gamma_total / (indexed.net_prefix(r_o) + gamma_total))
    };
    Ok(BoundCertificate {
        kind: BoundKind::IdenticalEqB1,
        r_o,
        ratio_limit,
        makespan_limit: 1.0 + slack,
        asymptotic_limit: Some(4.0 / 3.0),
        achieved_ratio: None,
    })
}

pub fn energy_bound_different(r_o: usize) -> Result<BoundCertificate> {
    if r_o == 0 {
        return Err(Error::ROutOfRange { r: 0, m: 0 });
    }
    let r = r_o as f64;
    let limit = 2.0 * r / (r + 1.0);
    Ok(BoundCertificate {
        kind: BoundKind::Different2R,
        r_o,
        ratio_limit: limit,
        makespan_limit: limit,
        asymptotic_limit: Some(LPT_UNIFORM_ASYMPTOTIC),
        achieved_ratio: None,
    })
}

/// Heuristic schedule for indivisible jobs.
#[derive(Debug, Clone)]
pub struct LptSchedule {
    pub target: IdealTarget,
    /// `assignment[j]` is the indexed position receiving input job `j`.
    pub assignment: Vec<usize>,
    pub schedule: Schedule,
    pub energy: EnergyBreakdown,
    pub certificate: BoundCertificate,
}

impl LptSchedule {
    pub fn makespan(&self) -> f64 {
        self.schedule.makespan()
    }
}

/// Job indices by non-increasing weight, ties in input order.
fn longest_first(jobs: &[Job]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by(|&a, &b| jobs[b].psi.total_cmp(&jobs[a].psi));
    order
}

fn check_target(indexed: &IndexedFleet, target: &IdealTarget) -> Result<()> {
    if target.r_o == 0 || target.r_o > indexed.len() {
        return Err(Error::ROutOfRange {
            r: target.r_o,
            m: indexed.len(),
        });
    }
    Ok(())
}

/// Bucket load ordered by load, then by bucket index.
#[derive(Debug, Clone, Copy)]
struct Bucket {
    load: f64,
    index: usize,
}

impl PartialEq for Bucket {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bucket {}

impl PartialOrd for Bucket {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bucket {
    fn cmp(&self, other: &Self) -> Ordering {
        self.load
            .total_cmp(&other.load)
            .then(self.index.cmp(&other.index))
    }
}

/// LPT on the first `r_o` identical-speed machines.
pub fn schedule_lpt_identical(
    indexed: &IndexedFleet,
    jobs: &[Job],
    target: &IdealTarget,
) -> Result<LptSchedule> {
    model::total_work(jobs)?;
    check_target(indexed, target)?;
    let order = longest_first(jobs);
    let buckets = target.r_o.min(jobs.len());

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); buckets];
    let mut loads = vec![0.0; buckets];
    let mut heap = BinaryHeap::with_capacity(buckets);
    for (b, &j) in order[..buckets].iter().enumerate() {
        members[b].push(j);
        loads[b] = jobs[j].psi;
        heap.push(Reverse(Bucket {
            load: loads[b],
            index: b,
        }));
    }
    for &j in &order[buckets..] {
        let Reverse(lightest) = heap.pop().expect("at least one bucket");
        let b = lightest.index;
        members[b].push(j);
        loads[b] += jobs[j].psi;
        heap.push(Reverse(Bucket {
            load: loads[b],
            index: b,
        }));
    }

    // heavier buckets go to machines earlier in the preference order
    let mut ranked: Vec<usize> = (0..buckets).collect();
    ranked.sort_by(|&a, &b| loads[b].total_cmp(&loads[a]));
    let mut assignment = vec![0; jobs.len()];
    for (machine, &b) in ranked.iter().enumerate() {
        for &j in &members[b] {
            assignment[j] = machine;
        }
    }

    let schedule = Schedule::from_assignment(indexed.fleet(), jobs, &assignment)?;
    let energy = energy_of_schedule(indexed.fleet(), &schedule)?;
    Ok(LptSchedule {
        target: *target,
        assignment,
        schedule,
        energy,
        certificate: energy_bound_identical(indexed, target.r_o)?,
    })
}

/// Longest-first, earliest-finish placement on the first `r_o` machines.
pub fn schedule_lpt_different(
    indexed: &IndexedFleet,
    jobs: &[Job],
    target: &IdealTarget,
) -> Result<LptSchedule> {
    model::total_work(jobs)?;
    check_target(indexed, target)?;
    let speeds: Vec<f64> = indexed.fleet().machines()[..target.r_o]
        .iter()
        .map(|m| m.upsilon)
        .collect();
    let mut finish = vec![0.0; target.r_o];
    let mut assignment = vec![0; jobs.len()];
    for j in longest_first(jobs) {
        let psi = jobs[j].psi;
        let mut best = 0;
        let mut best_finish = finish[0] + psi / speeds[0];
        for (i, (&f, &u)) in finish.iter().zip(&speeds).enumerate().skip(1) {
            let candidate = f + psi / u;
            if candidate < best_finish {
                best = i;
                best_finish = candidate;
            }
        }
        finish[best] = best_finish;
        assignment[j] = best;
    }

    let schedule = Schedule::from_assignment(indexed.fleet(), jobs, &assignment)?;
    let energy = energy_of_schedule(indexed.fleet(), &schedule)?;
    Ok(LptSchedule {
        target: *target,
        assignment,
        schedule,
        energy,
        certificate: energy_bound_different(target.r_o)?,
    })
}

/// Target plus heuristic schedule for the indexed fleet's ordering.
pub fn solve_nondivisible(indexed: &IndexedFleet, jobs: &[Job]) -> Result<LptSchedule> {
    match indexed.ordering() {
        Regime::IdenticalSpeed => {
            let target = ideal_target_identical(indexed, jobs)?;
            schedule_lpt_identical(indexed, jobs, &target)
        }
        Regime::DifferentSpeed => {
            let target = ideal_target_different(indexed, jobs)?;
            schedule_lpt_different(indexed, jobs, &target)
        }
    }
}
