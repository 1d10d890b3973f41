//! Reports emitted by `solve`, `oracle` and `metrics`.

use std::fmt::Write as _;

use serde::Serialize;

use emsched::divisible::{DivisibleSolution, IncompatibilityReport};
use emsched::model::EnergyBreakdown;
use emsched::nondivisible::{BoundCertificate, LptSchedule};
use emsched::oracle::{OracleConfig, OracleResult};
use emsched::{Fleet, IndexedFleet, Job, Schedule};

#[derive(Debug, Clone, Serialize)]
pub struct MachineRow {
    pub id: String,
    pub work: f64,
    pub working_time: f64,
    pub working_energy: f64,
    pub idle_energy: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub jobs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Energy {
    pub total: f64,
    pub working: f64,
    pub idle: f64,
}

impl From<&EnergyBreakdown> for Energy {
    fn from(e: &EnergyBreakdown) -> Self {
        Energy {
            total: e.total,
            working: e.working,
            idle: e.idle,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub kind: &'static str,
    pub r_o: usize,
    pub ratio_limit: f64,
    pub makespan_limit: f64,
    pub asymptotic_limit: Option<f64>,
    pub achieved_ratio: Option<f64>,
    pub holds: Option<bool>,
}

impl From<&BoundCertificate> for Certificate {
    fn from(c: &BoundCertificate) -> Self {
        Certificate {
            kind: c.kind.as_str(),
            r_o: c.r_o,
            ratio_limit: c.ratio_limit,
            makespan_limit: c.makespan_limit,
            asymptotic_limit: c.asymptotic_limit,
            achieved_ratio: c.achieved_ratio,
            holds: c.holds(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    Divisible {
        r: usize,
        makespan: f64,
        working_set: Vec<String>,
    },
    Nondivisible {
        r_o: usize,
        t_o: f64,
        divisible_makespan: f64,
        makespan: f64,
        certificate: Certificate,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Metrics {
    pub energy_per_work: Option<f64>,
    pub working_energy_ratio: Option<f64>,
}

impl Metrics {
    pub fn of(energy: &EnergyBreakdown, work: f64) -> Self {
        Metrics {
            energy_per_work: (work > 0.0).then(|| energy.total / work),
            working_energy_ratio: (energy.total > 0.0).then(|| energy.working / energy.total),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub job: String,
    pub machine: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub best_energy: f64,
    pub best_makespan: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub working_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<Assignment>>,
    pub explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_over_optimum: Option<f64>,
}

impl OracleSection {
    /// `fleet` is the fleet the oracle ran on; ids come from it.
    pub fn new(
        result: &OracleResult,
        fleet: &Fleet,
        jobs: &[Job],
        solver_energy: Option<f64>,
    ) -> Self {
        let machines = fleet.machines();
        let (working_set, assignment) = match &result.best_config {
            OracleConfig::Subset(_) => {
                let members = result.best_config.subset_members().unwrap_or_default();
                (
                    Some(members.iter().map(|&i| machines[i].id.clone()).collect()),
                    None,
                )
            }
            OracleConfig::Assignment(a) => (
                None,
                Some(
                    jobs.iter()
                        .zip(a)
                        .map(|(j, &pos)| Assignment {
                            job: j.id.clone(),
                            machine: machines[pos].id.clone(),
                        })
                        .collect(),
                ),
            ),
        };
        OracleSection {
            best_energy: result.best_energy,
            best_makespan: result.best_makespan,
            working_set,
            assignment,
            explored: result.explored,
            solver_energy,
            solver_over_optimum: solver_energy.map(|e| {
                if result.best_energy > 0.0 {
                    e / result.best_energy
                } else {
                    1.0
                }
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub solve_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub mode: &'static str,
    pub regime: &'static str,
    pub warnings: Vec<String>,
    pub total_work: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Solution>,
    /// Machines in preference order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub machines: Vec<MachineRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<Energy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Metrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefixes: Option<PrefixTable>,
    pub timing: Timing,
}

pub fn machine_rows(schedule: &Schedule, energy: &EnergyBreakdown) -> Vec<MachineRow> {
    schedule
        .loads()
        .iter()
        .zip(&energy.per_machine)
        .map(|(load, e)| MachineRow {
            id: load.machine.clone(),
            work: load.work,
            working_time: load.working_time,
            working_energy: e.working,
            idle_energy: e.idle,
            jobs: load.jobs.clone(),
        })
        .collect()
}

pub fn divisible_solution(s: &DivisibleSolution) -> Solution {
    Solution::Divisible {
        r: s.r,
        makespan: s.makespan,
        working_set: s.working_set.clone(),
    }
}

pub fn nondivisible_solution(s: &LptSchedule) -> Solution {
    Solution::Nondivisible {
        r_o: s.target.r_o,
        t_o: s.target.t_o,
        divisible_makespan: s.target.divisible_makespan,
        makespan: s.makespan(),
        certificate: Certificate::from(&s.certificate),
    }
}

/// Per-prefix energies and ratios of the `metrics` command.
#[derive(Debug, Clone, Serialize)]
pub struct PrefixTable {
    pub rows: Vec<PrefixRow>,
    pub energy_optimal_r: usize,
    pub ratio_optimal_r: usize,
    pub conflict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixRow {
    pub r: usize,
    pub last_machine: String,
    pub energy: f64,
    pub energy_per_work: Option<f64>,
    pub working_energy_ratio: Option<f64>,
}

impl PrefixTable {
    pub fn new(indexed: &IndexedFleet, report: &IncompatibilityReport, work: f64) -> Self {
        let rows = report
            .energies
            .iter()
            .zip(&report.ratios)
            .enumerate()
            .map(|(i, (&energy, &ratio))| PrefixRow {
                r: i + 1,
                last_machine: indexed.fleet().machines()[i].id.clone(),
                energy,
                energy_per_work: (work > 0.0).then(|| energy / work),
                working_energy_ratio: ratio,
            })
            .collect();
        PrefixTable {
            rows,
            energy_optimal_r: report.energy_optimal_r,
            ratio_optimal_r: report.ratio_optimal_r,
            conflict: report.conflict,
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} ({} work, {} regime), W = {}",
            self.command, self.mode, self.regime, self.total_work
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        match &self.solution {
            Some(Solution::Divisible {
                r,
                makespan,
                working_set,
            }) => {
                let _ = writeln!(out, "working machines r = {r}, makespan T = {makespan:.6}");
                let _ = writeln!(out, "working set: {}", working_set.join(", "));
            }
            Some(Solution::Nondivisible {
                r_o,
                t_o,
                divisible_makespan,
                makespan,
                certificate,
            }) => {
                let _ = writeln!(
                    out,
                    "target r_o = {r_o}, T_o = {t_o:.6} (divisible T = {divisible_makespan:.6})"
                );
                let _ = writeln!(out, "LPT makespan = {makespan:.6}");
                let _ = writeln!(
                    out,
                    "certificate {}: energy ratio <= {:.6}, makespan ratio <= {:.6}{}",
                    certificate.kind,
                    certificate.ratio_limit,
                    certificate.makespan_limit,
                    certificate
                        .asymptotic_limit
                        .map_or_else(String::new, |a| format!(", asymptotic {a:.4}"))
                );
                if let Some(a) = certificate.achieved_ratio {
                    let verdict = if certificate.holds == Some(true) {
                        "within"
                    } else {
                        "ABOVE"
                    };
                    let _ = writeln!(out, "achieved energy ratio {a:.6} ({verdict} the limit)");
                }
            }
            None => {}
        }
        if !self.machines.is_empty() {
            let _ = writeln!(
                out,
                "{:<12} {:>14} {:>14} {:>14} {:>14}  jobs",
                "machine", "work", "tau", "working E", "idle E"
            );
            for m in &self.machines {
                let _ = writeln!(
                    out,
                    "{:<12} {:>14.6} {:>14.6} {:>14.6} {:>14.6}  {}",
                    m.id,
                    m.work,
                    m.working_time,
                    m.working_energy,
                    m.idle_energy,
                    m.jobs.join(",")
                );
            }
        }
        if let Some(e) = &self.energy {
            let _ = writeln!(
                out,
                "energy: total {:.6} = working {:.6} + idle {:.6}",
                e.total, e.working, e.idle
            );
        }
        if let Some(m) = &self.metrics {
            let _ = writeln!(
                out,
                "energy per work {}, working-energy ratio {}",
                opt(m.energy_per_work),
                opt(m.working_energy_ratio)
            );
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "oracle: best energy {:.6}, makespan {:.6}, {} configurations",
                o.best_energy, o.best_makespan, o.explored
            );
            if let Some(ws) = &o.working_set {
                let _ = writeln!(out, "oracle working set: {}", ws.join(", "));
            }
            if let Some(a) = &o.assignment {
                let pairs: Vec<String> = a
                    .iter()
                    .map(|p| format!("{}->{}", p.job, p.machine))
                    .collect();
                let _ = writeln!(out, "oracle assignment: {}", pairs.join(" "));
            }
            if let (Some(e), Some(r)) = (o.solver_energy, o.solver_over_optimum) {
                let _ = writeln!(out, "solver energy {e:.6}, solver / optimum {r:.6}");
            }
        }
        if let Some(p) = &self.prefixes {
            let _ = writeln!(
                out,
                "{:>4} {:<12} {:>14} {:>14} {:>10}",
                "r", "adds", "energy", "E / W", "ratio"
            );
            for row in &p.rows {
                let _ = writeln!(
                    out,
                    "{:>4} {:<12} {:>14.6} {:>14} {:>10}",
                    row.r,
                    row.last_machine,
                    row.energy,
                    opt(row.energy_per_work),
                    opt(row.working_energy_ratio)
                );
            }
            let _ = writeln!(
                out,
                "energy-optimal r = {}, ratio-optimal r = {}, conflict: {}",
                p.energy_optimal_r,
                p.ratio_optimal_r,
                if p.conflict { "yes" } else { "no" }
            );
        }
        let _ = write!(out, "time: solve {:.3} ms", self.timing.solve_ms);
        if let Some(o) = self.timing.oracle_ms {
            let _ = write!(out, ", oracle {o:.3} ms");
        }
        out.push('\n');
        out
    }
}
