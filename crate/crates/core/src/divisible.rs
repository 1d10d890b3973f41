//! Exact energy-minimal schedules for divisible work.
//!
//! With divisible work the optimal working set is a prefix of the preference
//! order and every working machine runs for the same time `T`. Only the size
//! of that prefix has to be chosen:
//!
//! * identical speeds: scan `E(k) = (W / k)[Σ_{i<=k} mu + Σ_{i>k} gamma]` over
//!   every `k` (divided by the common speed when it is not 1);
//! * different speeds: grow the prefix while the next machine's
//!   `(mu - gamma) / upsilon` is strictly below the current energy per unit
//!   of work `(Σ (mu - gamma) + Γ) / Σ upsilon`.

use crate::error::{Error, Result};
use crate::model::{energy_of_schedule, EnergyBreakdown, Fleet, Regime, Schedule};
use crate::ordering::IndexedFleet;
use crate::tol;

/// Optimal divisible schedule.
#[derive(Debug, Clone)]
pub struct DivisibleSolution {
    /// Number of working machines.
    pub r: usize,
    /// Ids of the first `r` indexed machines.
    pub working_set: Vec<String>,
    pub makespan: f64,
    /// Work per machine, in indexed order (zero past `r`).
    pub per_machine_work: Vec<f64>,
    pub schedule: Schedule,
    pub energy: EnergyBreakdown,
    pub total_work: f64,
}

impl DivisibleSolution {
    /// Total energy per unit of work; zero when there is no work.
    pub fn energy_per_work(&self) -> f64 {
        if self.total_work > 0.0 {
            self.energy.total / self.total_work
        } else {
            0.0
        }
    }
}

/// How [`optimal_r_identical_with`] searches the working-machine count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RSearch {
    /// Evaluate every `E(k)` and keep the smallest minimizer.
    #[default]
    LinearScan,
    /// Bisection on `E(k)`, valid when the curve is unimodal.
    BinarySearch,
}

fn check_work(work: f64) -> Result<()> {
    if work.is_finite() && work >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWork(work))
    }
}

fn require_ordering(indexed: &IndexedFleet, expected: Regime) -> Result<()> {
    if indexed.ordering() != expected {
        return Err(Error::RegimeMismatch {
            expected: expected.as_str(),
            found: indexed.ordering().as_str(),
        });
    }
    Ok(())
}

fn require_uniform(fleet: &Fleet) -> Result<()> {
    if !fleet.has_uniform_speed() {
        return Err(Error::RegimeMismatch {
            expected: Regime::IdenticalSpeed.as_str(),
            found: Regime::DifferentSpeed.as_str(),
        });
    }
    Ok(())
}

/// `E(k)` for `k = 1..=m` on an identical-speed indexed fleet.
pub fn identical_energy_curve(indexed: &IndexedFleet, work: f64) -> Vec<f64> {
    let speed = indexed.fleet().machines()[0].upsilon;
    (1..=indexed.len())
        .map(|k| {
            let powered = indexed.mu_prefix(k) + indexed.gamma_suffix(k);
            work / (k as f64 * speed) * powered
        })
        .collect()
}

/// Smallest `k` (1-based) minimizing `curve`, treating values within the
/// comparison tolerance as ties.
fn smallest_minimizer(curve: &[f64]) -> usize {
    let mut best = 0;
    for (i, &e) in curve.iter().enumerate().skip(1) {
        if tol::definitely_less(e, curve[best]) {
            best = i;
        }
    }
    best + 1
}

/// Bisection over `E(k)` with `E(0) = E(m+1) = +inf`, returning a `k` with
/// `E(k-1) > E(k) <= E(k+1)`.
fn bisect_minimizer(curve: &[f64]) -> usize {
    let m = curve.len();
    let at = |k: usize| -> f64 {
        if k == 0 || k > m {
            f64::INFINITY
        } else {
            curve[k - 1]
        }
    };
    let (mut low, mut high) = (1usize, m);
    while low <= high {
        let mid = low + (high - low) / 2;
        let descending = at(mid - 1) > at(mid);
        if descending && at(mid) <= at(mid + 1) {
            return mid;
        }
        if descending {
            low = mid + 1;
        } else {
            high = mid - 1;
        }
    }
    low.clamp(1, m)
}

/// Energy-minimal divisible schedule on identical-speed machines.
pub fn optimal_r_identical(indexed: &IndexedFleet, work: f64) -> Result<DivisibleSolution> {
    optimal_r_identical_with(indexed, work, RSearch::LinearScan)
}

pub fn optimal_r_identical_with(
    indexed: &IndexedFleet,
    work: f64,
    search: RSearch,
) -> Result<DivisibleSolution> {
    require_ordering(indexed, Regime::IdenticalSpeed)?;
    require_uniform(indexed.fleet())?;
    check_work(work)?;
    if work == 0.0 {
        return solution_with_equal_time(indexed, 1, 0.0);
    }
    let curve = identical_energy_curve(indexed, work);
    let r = match search {
        RSearch::LinearScan => smallest_minimizer(&curve),
        RSearch::BinarySearch => bisect_minimizer(&curve),
    };
    solution_with_equal_time(indexed, r, work)
}

/// `E_{m,r-1} - E_{m,r}` when work `deltas[i]` is withdrawn from machine
/// `i+1` and handed to machine `r`. Positive means admitting machine `r`
/// saves energy.
pub fn admission_gain_identical(indexed: &IndexedFleet, r: usize, deltas: &[f64]) -> Result<f64> {
    let m = indexed.len();
    if r < 2 || r > m {
        return Err(Error::ROutOfRange { r, m });
    }
    if deltas.len() != r - 1 {
        return Err(Error::DimensionMismatch {
            expected: r - 1,
            got: deltas.len(),
        });
    }
    if let Some(i) = deltas.iter().position(|&s| s < 0.0) {
        return Err(Error::NegativeDelta(i));
    }
    let machines = indexed.fleet().machines();
    let candidate = machines[r - 1].net_power();
    let shifted: f64 = machines[..r - 1]
        .iter()
        .zip(deltas)
        .map(|(mc, &s)| (mc.net_power() - candidate) * s)
        .sum();
    Ok(shifted + deltas[0] * indexed.fleet().gamma_total())
}

/// Energy-minimal divisible schedule on machines with different speeds.
pub fn optimal_working_set_different(
    indexed: &IndexedFleet,
    work: f64,
) -> Result<DivisibleSolution> {
    require_ordering(indexed, Regime::DifferentSpeed)?;
    check_work(work)?;
    if work == 0.0 {
        return solution_with_equal_time(indexed, 1, 0.0);
    }
    let r = greedy_working_count(indexed);
    solution_with_equal_time(indexed, r, work)
}

/// Size of the working prefix chosen by the admission test.
pub fn greedy_working_count(indexed: &IndexedFleet) -> usize {
    let machines = indexed.fleet().machines();
    let gamma_total = indexed.fleet().gamma_total();
    let mut net = machines[0].net_power() + gamma_total;
    let mut speed = machines[0].upsilon;
    let mut r = 1;
    while r < machines.len() {
        let next = &machines[r];
        if !admits(net / speed, next.net_power_per_speed()) {
            break;
        }
        net += next.net_power();
        speed += next.upsilon;
        r += 1;
    }
    r
}

/// Strict admission: the candidate ratio must be below the current energy
/// per unit of work by more than the tolerance.
#[inline]
pub(crate) fn admits(current: f64, candidate_ratio: f64) -> bool {
    tol::definitely_less(candidate_ratio, current)
}

/// Puts the first `r` indexed machines to work for the same time `T`.
fn solution_with_equal_time(
    indexed: &IndexedFleet,
    r: usize,
    work: f64,
) -> Result<DivisibleSolution> {
    let fleet = indexed.fleet();
    let machines = fleet.machines();
    let makespan = work / indexed.speed_prefix(r);
    let uniform = indexed.ordering() == Regime::IdenticalSpeed;
    let per_machine_work: Vec<f64> = machines
        .iter()
        .enumerate()
        .map(|(i, mc)| match i < r {
            true if uniform => work / r as f64,
            true => makespan * mc.upsilon,
            false => 0.0,
        })
        .collect();
    let schedule = Schedule::from_work(fleet, &per_machine_work)?;
    let energy = energy_of_schedule(fleet, &schedule)?;
    Ok(DivisibleSolution {
        r,
        working_set: indexed.ids(r),
        makespan: schedule.makespan(),
        per_machine_work,
        schedule,
        energy,
        total_work: work,
    })
}

/// Solves with the routine matching the indexed fleet's ordering.
pub fn solve_divisible(indexed: &IndexedFleet, work: f64) -> Result<DivisibleSolution> {
    match indexed.ordering() {
        Regime::IdenticalSpeed => optimal_r_identical(indexed, work),
        Regime::DifferentSpeed => optimal_working_set_different(indexed, work),
    }
}

/// Share of total energy spent working when the first `r` machines work for
/// equal time: `Σ_{i<=r} mu / (Σ_{i<=r} mu + Σ_{i>r} gamma)`.
pub fn working_energy_ratio(indexed: &IndexedFleet, r: usize) -> Result<f64> {
    let m = indexed.len();
    if r == 0 || r > m {
        return Err(Error::ROutOfRange { r, m });
    }
    let working = indexed.mu_prefix(r);
    let denominator = working + indexed.gamma_suffix(r);
    if denominator == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(working / denominator)
}

/// Energy-per-work against working-energy share for every working count.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompatibilityReport {
    pub energy_optimal_r: usize,
    /// Largest `r` maximizing the working-energy ratio.
    pub ratio_optimal_r: usize,
    /// Prefix energy for `r = 1..=m`.
    pub energies: Vec<f64>,
    /// Working-energy ratio for `r = 1..=m`; `None` where undefined.
    pub ratios: Vec<Option<f64>>,
    /// The energy-optimal working set does not maximize the ratio.
    pub conflict: bool,
}

pub fn incompatibility_report(indexed: &IndexedFleet, work: f64) -> Result<IncompatibilityReport> {
    let solution = solve_divisible(indexed, work)?;
    let m = indexed.len();
    let energies = (1..=m).map(|r| indexed.prefix_energy(r, work)).collect();
    let ratios: Vec<Option<f64>> = (1..=m)
        .map(|r| working_energy_ratio(indexed, r).ok())
        .collect();

    let top = ratios
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let ratio_optimal_r = ratios
        .iter()
        .rposition(|v| v.is_some_and(|v| !tol::definitely_less(v, top)))
        .map_or(m, |i| i + 1);
    let conflict = match ratios[solution.r - 1] {
        Some(at_solution) => tol::definitely_less(at_solution, top),
        None => false,
    };
    Ok(IncompatibilityReport {
        energy_optimal_r: solution.r,
        ratio_optimal_r,
        energies,
        ratios,
        conflict,
    })
}
