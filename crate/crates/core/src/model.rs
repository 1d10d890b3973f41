//! Machines, jobs, fleets and schedules, plus energy and makespan evaluation
//! under the working/idle power model.
//!
//! A machine `c` draws working power `mu` while executing and idle power
//! `gamma` while powered but idle, and completes `upsilon` units of work per
//! unit time. Every machine stays powered for the whole makespan `T`, so a
//! machine that works for `tau` consumes `mu * tau + gamma * (T - tau)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tol;

/// One physical executor.
#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub id: String,
    /// Working power.
    pub mu: f64,
    /// Idle power.
    pub gamma: f64,
    /// Speed: work completed per unit time.
    pub upsilon: f64,
}

impl Machine {
    pub fn new(id: impl Into<String>, mu: f64, gamma: f64, upsilon: f64) -> Self {
        Self {
            id: id.into(),
            mu,
            gamma,
            upsilon,
        }
    }

    /// `mu - gamma`, the extra power drawn while working.
    #[inline]
    pub fn net_power(&self) -> f64 {
        self.mu - self.gamma
    }

    /// `(mu - gamma) / upsilon`, extra energy per unit of work.
    #[inline]
    pub fn net_power_per_speed(&self) -> f64 {
        self.net_power() / self.upsilon
    }
}

/// A unit of demand; `psi` is its processing time on a unit-speed machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: String,
    pub psi: f64,
}

impl Job {
    pub fn new(id: impl Into<String>, psi: f64) -> Self {
        Self { id: id.into(), psi }
    }
}

/// Validates job weights and returns the total work `W`.
pub fn total_work(jobs: &[Job]) -> Result<f64> {
    if jobs.is_empty() {
        return Err(Error::NoJobs);
    }
    let mut seen = std::collections::HashSet::with_capacity(jobs.len());
    for job in jobs {
        if !job.psi.is_finite() {
            return Err(Error::NonFinite {
                id: job.id.clone(),
                field: "psi",
            });
        }
        if job.psi <= 0.0 {
            return Err(Error::NonPositiveWeight {
                id: job.id.clone(),
                psi: job.psi,
            });
        }
        if !seen.insert(job.id.as_str()) {
            return Err(Error::DuplicateId(job.id.clone()));
        }
    }
    Ok(jobs.iter().map(|j| j.psi).sum())
}

/// Speed regime of a fleet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    IdenticalSpeed,
    DifferentSpeed,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::IdenticalSpeed => "identical_speed",
            Regime::DifferentSpeed => "different_speed",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Non-fatal validation findings.
#[derive(Debug, Clone, PartialEq)]
pub enum FleetWarning {
    /// Idling costs more than working on this machine.
    IdleExceedsWorking { id: String, mu: f64, gamma: f64 },
}

impl std::fmt::Display for FleetWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FleetWarning::IdleExceedsWorking { id, mu, gamma } => write!(
                f,
                "machine `{id}` has idle power {gamma} above working power {mu}"
            ),
        }
    }
}

/// A validated, ordered collection of machines.
#[derive(Debug, Clone)]
pub struct Fleet {
    machines: Vec<Machine>,
    gamma_total: f64,
    regime: Regime,
    uniform_speed: bool,
    warnings: Vec<FleetWarning>,
    positions: HashMap<String, usize>,
}

/// Checks every machine and builds a [`Fleet`], detecting its regime.
pub fn validate_fleet(machines: Vec<Machine>) -> Result<Fleet> {
    if machines.is_empty() {
        return Err(Error::EmptyFleet);
    }
    let mut warnings = Vec::new();
    let mut positions = HashMap::with_capacity(machines.len());
    for (pos, m) in machines.iter().enumerate() {
        for (field, value) in [("mu", m.mu), ("gamma", m.gamma), ("upsilon", m.upsilon)] {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    id: m.id.clone(),
                    field,
                });
            }
        }
        if m.upsilon <= 0.0 {
            return Err(Error::NonPositiveSpeed {
                id: m.id.clone(),
                upsilon: m.upsilon,
            });
        }
        for (field, value) in [("mu", m.mu), ("gamma", m.gamma)] {
            if value < 0.0 {
                return Err(Error::NegativePower {
                    id: m.id.clone(),
                    field,
                    value,
                });
            }
        }
        if m.gamma > m.mu {
            warnings.push(FleetWarning::IdleExceedsWorking {
                id: m.id.clone(),
                mu: m.mu,
                gamma: m.gamma,
            });
        }
        if positions.insert(m.id.clone(), pos).is_some() {
            return Err(Error::DuplicateId(m.id.clone()));
        }
    }
    let first = machines[0].upsilon;
    let uniform_speed = machines.iter().all(|m| tol::approx_eq(m.upsilon, first));
    let regime = if uniform_speed {
        Regime::IdenticalSpeed
    } else {
        Regime::DifferentSpeed
    };
    let gamma_total = machines.iter().map(|m| m.gamma).sum();
    Ok(Fleet {
        machines,
        gamma_total,
        regime,
        uniform_speed,
        warnings,
        positions,
    })
}

impl Fleet {
    pub fn machines(&self) -> &[Machine] {
        &self.machines
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machines.is_empty()
    }

    /// Sum of all idle powers, `Γ`.
    pub fn gamma_total(&self) -> f64 {
        self.gamma_total
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// All speeds agree, whatever regime was forced.
    pub fn has_uniform_speed(&self) -> bool {
        self.uniform_speed
    }

    pub fn warnings(&self) -> &[FleetWarning] {
        &self.warnings
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.positions.get(id).copied()
    }

    pub fn fastest_speed(&self) -> f64 {
        self.machines
            .iter()
            .map(|m| m.upsilon)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Forces a regime. Any fleet may be treated as different-speed; only a
    /// fleet whose speeds agree may be treated as identical-speed.
    pub fn with_regime(mut self, regime: Regime) -> Result<Fleet> {
        if regime == Regime::IdenticalSpeed && !self.uniform_speed {
            return Err(Error::RegimeMismatch {
                expected: Regime::IdenticalSpeed.as_str(),
                found: Regime::DifferentSpeed.as_str(),
            });
        }
        self.regime = regime;
        Ok(self)
    }

    /// Reorders machines; `order[new] = old`.
    pub(crate) fn permuted(&self, order: &[usize]) -> Fleet {
        debug_assert_eq!(order.len(), self.machines.len());
        let machines: Vec<Machine> = order.iter().map(|&i| self.machines[i].clone()).collect();
        let positions = machines
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        Fleet {
            gamma_total: machines.iter().map(|m| m.gamma).sum(),
            machines,
            regime: self.regime,
            uniform_speed: self.uniform_speed,
            warnings: self.warnings.clone(),
            positions,
        }
    }

    /// Returns a copy with every power multiplied by `factor`.
    pub fn scale_powers(&self, factor: f64) -> Result<Fleet> {
        let machines = self
            .machines
            .iter()
            .map(|m| Machine::new(m.id.clone(), m.mu * factor, m.gamma * factor, m.upsilon))
            .collect();
        validate_fleet(machines)?.with_regime(self.regime)
    }
}

/// Work and working time of one machine in a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineLoad {
    pub machine: String,
    pub work: f64,
    pub working_time: f64,
    /// Jobs placed on the machine; empty for divisible work.
    pub jobs: Vec<String>,
}

/// Per-machine assignment with its makespan.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    loads: Vec<MachineLoad>,
    makespan: f64,
}

impl Schedule {
    /// Divisible schedule from per-machine work given in fleet order.
    pub fn from_work(fleet: &Fleet, work: &[f64]) -> Result<Schedule> {
        if work.len() != fleet.len() {
            return Err(Error::DimensionMismatch {
                expected: fleet.len(),
                got: work.len(),
            });
        }
        let loads = fleet
            .machines()
            .iter()
            .zip(work)
            .map(|(m, &w)| MachineLoad {
                machine: m.id.clone(),
                work: w,
                working_time: w / m.upsilon,
                jobs: Vec::new(),
            })
            .collect();
        Ok(Self::closing(loads))
    }

    /// Non-divisible schedule; `assignment[j]` is the fleet position of job `j`.
    pub fn from_assignment(fleet: &Fleet, jobs: &[Job], assignment: &[usize]) -> Result<Schedule> {
        if assignment.len() != jobs.len() {
            return Err(Error::DimensionMismatch {
                expected: jobs.len(),
                got: assignment.len(),
            });
        }
        let mut work = vec![0.0; fleet.len()];
        let mut lists = vec![Vec::new(); fleet.len()];
        for (job, &pos) in jobs.iter().zip(assignment) {
            if pos >= fleet.len() {
                return Err(Error::ROutOfRange {
                    r: pos + 1,
                    m: fleet.len(),
                });
            }
            work[pos] += job.psi;
            lists[pos].push(job.id.clone());
        }
        let loads = fleet
            .machines()
            .iter()
            .zip(work)
            .zip(lists)
            .map(|((m, w), jobs)| MachineLoad {
                machine: m.id.clone(),
                work: w,
                working_time: w / m.upsilon,
                jobs,
            })
            .collect();
        Ok(Self::closing(loads))
    }

    /// Schedule with explicit working times over an explicit horizon, which
    /// may exceed the longest working time. Work is reported equal to the
    /// working time (unit speed).
    pub fn from_working_times(entries: Vec<(String, f64)>, makespan: f64) -> Schedule {
        let loads = entries
            .into_iter()
            .map(|(machine, tau)| MachineLoad {
                machine,
                work: tau,
                working_time: tau,
                jobs: Vec::new(),
            })
            .collect();
        Schedule { loads, makespan }
    }

    fn closing(loads: Vec<MachineLoad>) -> Schedule {
        let makespan = loads.iter().map(|l| l.working_time).fold(0.0, f64::max);
        Schedule { loads, makespan }
    }

    pub fn loads(&self) -> &[MachineLoad] {
        &self.loads
    }

    pub fn makespan(&self) -> f64 {
        self.makespan
    }

    pub fn total_work(&self) -> f64 {
        self.loads.iter().map(|l| l.work).sum()
    }

    pub fn load(&self, machine: &str) -> Option<&MachineLoad> {
        self.loads.iter().find(|l| l.machine == machine)
    }
}

/// Longest working time in the schedule.
pub fn makespan_of_schedule(schedule: &Schedule) -> Result<f64> {
    if schedule.loads.is_empty() {
        return Err(Error::EmptySchedule);
    }
    Ok(schedule
        .loads
        .iter()
        .map(|l| l.working_time)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Working and idle energy of a single machine.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineEnergy {
    pub machine: String,
    pub working: f64,
    pub idle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    /// `working + idle`.
    pub total: f64,
    pub working: f64,
    pub idle: f64,
    /// In fleet order, one entry per machine of the fleet.
    pub per_machine: Vec<MachineEnergy>,
}

#[inline]
pub(crate) fn machine_energy(m: &Machine, working_time: f64, makespan: f64) -> (f64, f64) {
    (m.mu * working_time, m.gamma * (makespan - working_time))
}

/// Energy of a schedule: every machine of the fleet draws working power for
/// its working time and idle power for the rest of the makespan. Machines the
/// schedule does not mention idle for the whole makespan.
pub fn energy_of_schedule(fleet: &Fleet, schedule: &Schedule) -> Result<EnergyBreakdown> {
    let mut times = vec![0.0; fleet.len()];
    for load in &schedule.loads {
        let pos = fleet
            .position(&load.machine)
            .ok_or_else(|| Error::UnknownMachine(load.machine.clone()))?;
        times[pos] += load.working_time;
    }
    let makespan = schedule.makespan;
    let mut per_machine = Vec::with_capacity(fleet.len());
    let (mut working, mut idle) = (0.0, 0.0);
    for (m, &tau) in fleet.machines().iter().zip(&times) {
        if tau > makespan && !tol::approx_eq(tau, makespan) {
            return Err(Error::NegativeIdleTime {
                id: m.id.clone(),
                working_time: tau,
                makespan,
            });
        }
        let (w, i) = machine_energy(m, tau, makespan.max(tau));
        working += w;
        idle += i;
        per_machine.push(MachineEnergy {
            machine: m.id.clone(),
            working: w,
            idle: i,
        });
    }
    Ok(EnergyBreakdown {
        total: working + idle,
        working,
        idle,
        per_machine,
    })
}

/// Energy of running the first `r` machines of `fleet` for equal time on
/// total work `work`: `W * (Σ_{i<=r} (mu - gamma) + Γ) / Σ_{i<=r} upsilon`.
///
/// The fleet is taken in its given order; callers pass an indexed fleet when
/// they want the prefix of the preference order.
pub fn energy_divisible_closed_form(fleet: &Fleet, r: usize, work: f64) -> Result<f64> {
    if r == 0 || r > fleet.len() {
        return Err(Error::ROutOfRange { r, m: fleet.len() });
    }
    if !(work.is_finite() && work >= 0.0) {
        return Err(Error::InvalidWork(work));
    }
    let prefix = &fleet.machines()[..r];
    let net: f64 = prefix.iter().map(Machine::net_power).sum();
    let speed: f64 = prefix.iter().map(|m| m.upsilon).sum();
    Ok(work * ((net + fleet.gamma_total()) / speed))
}
