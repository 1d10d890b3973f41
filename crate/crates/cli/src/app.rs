use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use emsched::divisible::incompatibility_report;
use emsched::instance::{generate, InstanceSpec};
use emsched::nondivisible::solve_nondivisible;
use emsched::oracle::{oracle_divisible_with, oracle_nondivisible_with};
use emsched::{
    index_for_regime, solve_divisible, validate_fleet, Fleet, IndexedFleet, Job, Regime,
};

use crate::bench::{run_bench, BenchConfig};
use crate::report::{
    divisible_solution, machine_rows, nondivisible_solution, Energy, Metrics, OracleSection,
    PrefixTable, Report, Timing,
};
use crate::scenario::{self, Mode, ParseError, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "emsched",
    version,
    about = "Energy-minimal scheduling on machines with working and idle power"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also run the exhaustive oracle and compare.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the oracle (0 = all available cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Force a regime instead of detecting it from the speeds.
    #[arg(long, global = true, value_parser = scenario::parse_regime)]
    pub regime: Option<Regime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON.
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scenario.
    Solve { scenario: PathBuf },
    /// Solve a scenario exactly by enumeration.
    Oracle {
        scenario: PathBuf,
        /// Only the first N machines of the scenario receive jobs.
        #[arg(long)]
        machine_limit: Option<usize>,
    },
    /// Print a random scenario.
    Gen(GenArgs),
    /// Time the solvers on generated instances.
    Bench(BenchArgs),
    /// Energy per work and working-energy ratio for every working-set size.
    Metrics { scenario: PathBuf },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of machines.
    #[arg(short = 'm', long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub machines: u32,
    /// Number of jobs; 0 emits divisible total work.
    #[arg(short = 'n', long = "job-count", default_value_t = 0)]
    pub job_count: usize,
    /// Scenario mode; defaults to nondivisible when jobs are requested.
    #[arg(long, value_parser = |s: &str| s.parse::<Mode>())]
    pub mode: Option<Mode>,
    /// Draw speeds in [1, max-speed] instead of all 1.
    #[arg(long)]
    pub different_speeds: bool,
    /// Draw idle power independently of working power.
    #[arg(long)]
    pub allow_idle_above_working: bool,
    #[arg(long, default_value_t = 100.0)]
    pub max_power: f64,
    #[arg(long, default_value_t = 4.0)]
    pub max_speed: f64,
    #[arg(long, default_value_t = 100.0)]
    pub max_psi: f64,
    #[arg(long, default_value_t = 100.0)]
    pub max_work: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Problem sizes (machines for divisible runs, jobs for LPT runs).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Machines used by the LPT runs.
    #[arg(long, default_value_t = 1000)]
    pub lpt_machines: usize,
    /// Timed runs per measurement; the fastest is kept.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("{0}")]
    Model(emsched::Error),
    #[error("{0}")]
    Guard(emsched::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Scenario(_) | CliError::Model(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl From<emsched::Error> for CliError {
    fn from(e: emsched::Error) -> Self {
        match e {
            emsched::Error::FleetTooLarge { .. } | emsched::Error::InstanceTooLarge { .. } => {
                CliError::Guard(e)
            }
            other => CliError::Model(other),
        }
    }
}

/// A validated scenario.
pub struct Problem {
    pub mode: Mode,
    pub fleet: Fleet,
    pub jobs: Vec<Job>,
    pub work: f64,
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    scenario::parse(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn validate(s: &Scenario, forced: Option<Regime>) -> Result<Problem, CliError> {
    let mode = s.effective_mode();
    match (s.total_work.is_some(), s.jobs.is_empty()) {
        (true, false) => {
            return Err(CliError::Scenario(
                "give either total_work or jobs, not both".into(),
            ))
        }
        (false, true) => return Err(CliError::Scenario("no jobs and no total_work given".into())),
        (true, true) if mode == Mode::Nondivisible => {
            return Err(CliError::Scenario(
                "nondivisible mode needs jobs rather than total_work".into(),
            ))
        }
        _ => {}
    }
    let mut fleet = validate_fleet(s.machines.clone())?;
    if let Some(regime) = forced.or(s.regime) {
        fleet = fleet.with_regime(regime)?;
    }
    let work = match s.total_work {
        Some(w) if w.is_finite() && w >= 0.0 => w,
        Some(w) => return Err(emsched::Error::InvalidWork(w).into()),
        None => emsched::model::total_work(&s.jobs)?,
    };
    Ok(Problem {
        mode,
        fleet,
        jobs: s.jobs.clone(),
        work,
    })
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn base_report(command: &'static str, p: &Problem) -> Report {
    Report {
        command,
        mode: p.mode.as_str(),
        regime: p.fleet.regime().as_str(),
        warnings: p.fleet.warnings().iter().map(ToString::to_string).collect(),
        total_work: p.work,
        solution: None,
        machines: Vec::new(),
        energy: None,
        metrics: None,
        oracle: None,
        prefixes: None,
        timing: Timing {
            solve_ms: 0.0,
            oracle_ms: None,
        },
    }
}

/// Runs the solver for the problem's mode; returns the indexed fleet and the
/// solver's energy for oracle comparison.
fn fill_solution(report: &mut Report, p: &Problem) -> Result<(IndexedFleet, f64), CliError> {
    let start = Instant::now();
    let indexed = index_for_regime(&p.fleet);
    let energy = match p.mode {
        Mode::Divisible => {
            let s = solve_divisible(&indexed, p.work)?;
            report.timing.solve_ms = millis(start);
            report.solution = Some(divisible_solution(&s));
            report.machines = machine_rows(&s.schedule, &s.energy);
            report.energy = Some(Energy::from(&s.energy));
            report.metrics = Some(Metrics::of(&s.energy, p.work));
            s.energy.total
        }
        Mode::Nondivisible => {
            let s = solve_nondivisible(&indexed, &p.jobs)?;
            report.timing.solve_ms = millis(start);
            report.solution = Some(nondivisible_solution(&s));
            report.machines = machine_rows(&s.schedule, &s.energy);
            report.energy = Some(Energy::from(&s.energy));
            report.metrics = Some(Metrics::of(&s.energy, p.work));
            s.energy.total
        }
    };
    Ok((indexed, energy))
}

fn fill_oracle(
    report: &mut Report,
    p: &Problem,
    solver_energy: Option<f64>,
    machine_limit: Option<usize>,
    workers: usize,
    indexed: &IndexedFleet,
) -> Result<(), CliError> {
    let start = Instant::now();
    let (result, fleet) = match p.mode {
        Mode::Divisible => (oracle_divisible_with(&p.fleet, p.work, workers)?, &p.fleet),
        // the indexed fleet keeps machine_limit aligned with the solver's prefix
        Mode::Nondivisible => (
            oracle_nondivisible_with(indexed.fleet(), &p.jobs, machine_limit, workers)?,
            indexed.fleet(),
        ),
    };
    report.timing.oracle_ms = Some(millis(start));
    if let (Some(energy), Some(crate::report::Solution::Nondivisible { certificate, .. })) =
        (solver_energy, report.solution.as_mut())
    {
        let ratio = if result.best_energy > 0.0 {
            energy / result.best_energy
        } else {
            1.0
        };
        certificate.achieved_ratio = Some(ratio);
        certificate.holds = Some(ratio <= certificate.ratio_limit + 1e-9);
    }
    report.oracle = Some(OracleSection::new(&result, fleet, &p.jobs, solver_energy));
    Ok(())
}

pub fn cmd_solve(path: &Path, common: &Common) -> Result<Report, CliError> {
    let p = validate(&load(path)?, common.regime)?;
    let mut report = base_report("solve", &p);
    let (indexed, energy) = fill_solution(&mut report, &p)?;
    if common.oracle {
        fill_oracle(&mut report, &p, Some(energy), None, common.jobs, &indexed)?;
    }
    Ok(report)
}

pub fn cmd_oracle(
    path: &Path,
    machine_limit: Option<usize>,
    common: &Common,
) -> Result<Report, CliError> {
    let p = validate(&load(path)?, common.regime)?;
    let mut report = base_report("oracle", &p);
    let (indexed, energy) = fill_solution(&mut report, &p)?;
    fill_oracle(
        &mut report,
        &p,
        Some(energy),
        machine_limit,
        common.jobs,
        &indexed,
    )?;
    Ok(report)
}

pub fn cmd_metrics(path: &Path, common: &Common) -> Result<Report, CliError> {
    let p = validate(&load(path)?, common.regime)?;
    let mut report = base_report("metrics", &p);
    let start = Instant::now();
    let indexed = index_for_regime(&p.fleet);
    let inc = incompatibility_report(&indexed, p.work)?;
    let solution = solve_divisible(&indexed, p.work)?;
    report.timing.solve_ms = millis(start);
    report.solution = Some(divisible_solution(&solution));
    report.energy = Some(Energy::from(&solution.energy));
    report.metrics = Some(Metrics::of(&solution.energy, p.work));
    report.prefixes = Some(PrefixTable::new(&indexed, &inc, p.work));
    Ok(report)
}

pub fn cmd_gen(args: &GenArgs, common: &Common) -> Result<Scenario, CliError> {
    let mode = args.mode.unwrap_or(if args.job_count > 0 {
        Mode::Nondivisible
    } else {
        Mode::Divisible
    });
    if mode == Mode::Nondivisible && args.job_count == 0 {
        return Err(CliError::Usage(
            "nondivisible scenarios need --job-count > 0".into(),
        ));
    }
    let bounds = [
        ("--max-power", args.max_power, 0.0),
        ("--max-speed", args.max_speed, 1.0),
        ("--max-psi", args.max_psi, 1.0),
        ("--max-work", args.max_work, 0.0),
    ];
    for (flag, value, low) in bounds {
        if !(value.is_finite() && value > low) {
            return Err(CliError::Usage(format!(
                "{flag} must be finite and above {low}"
            )));
        }
    }
    let spec = InstanceSpec {
        machines: args.machines as usize,
        jobs: args.job_count,
        different_speeds: args.different_speeds,
        idle_above_working: args.allow_idle_above_working,
        max_power: args.max_power,
        max_speed: args.max_speed,
        max_psi: args.max_psi,
        max_work: args.max_work,
    };
    let inst = generate(&spec, common.seed);
    let divisible_work = mode == Mode::Divisible && inst.jobs.is_empty();
    Ok(Scenario {
        mode: Some(mode),
        regime: common.regime.or(Some(if args.different_speeds {
            Regime::DifferentSpeed
        } else {
            Regime::IdenticalSpeed
        })),
        total_work: divisible_work.then_some(inst.total_work),
        machines: inst.machines,
        jobs: inst.jobs,
    })
}

pub fn cmd_bench(args: &BenchArgs, common: &Common) -> Result<String, CliError> {
    let sizes = if args.sizes.is_empty() {
        vec![1_000, 10_000, 100_000]
    } else {
        args.sizes.clone()
    };
    if sizes.contains(&0) || args.lpt_machines == 0 || args.repeats == 0 {
        return Err(CliError::Usage(
            "sizes, --lpt-machines and --repeats must be positive".into(),
        ));
    }
    let result = run_bench(&BenchConfig {
        sizes,
        lpt_machines: args.lpt_machines,
        repeats: args.repeats,
        seed: common.seed,
    });
    Ok(match common.format {
        Format::Text => result.to_text(),
        Format::Machine => serde_json::to_string_pretty(&result).expect("bench results serialize"),
    })
}

/// Runs the parsed command and returns what to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let common = &cli.common;
    let render = |r: Report| match common.format {
        Format::Text => r.to_text(),
        Format::Machine => r.to_json(),
    };
    match &cli.command {
        Command::Solve { scenario } => cmd_solve(scenario, common).map(render),
        Command::Oracle {
            scenario,
            machine_limit,
        } => cmd_oracle(scenario, *machine_limit, common).map(render),
        Command::Metrics { scenario } => cmd_metrics(scenario, common).map(render),
        Command::Gen(args) => cmd_gen(args, common).map(|s| s.to_text()),
        Command::Bench(args) => cmd_bench(args, common),
    }
}
