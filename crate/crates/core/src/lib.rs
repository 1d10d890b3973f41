//! Energy-minimal offline scheduling of independent jobs on machines that
//! draw a working power `mu` while busy and an idle power `gamma` otherwise,
//! and process work at speed `upsilon`. All machines stay on until the last
//! one finishes, so a schedule with makespan `T` consumes
//! `Σ [mu τ + gamma (T - τ)]`.
//!
//! * [`divisible`]: exact solvers when work can be split arbitrarily.
//! * [`nondivisible`]: LPT-style heuristics for indivisible jobs, with the
//!   energy ratio they guarantee.
//! * [`oracle`]: exhaustive search for small instances.

pub mod divisible;
pub mod error;
pub mod instance;
pub mod model;
pub mod nondivisible;
pub mod oracle;
pub mod ordering;
pub mod tol;

pub use divisible::{
    incompatibility_report, optimal_r_identical, optimal_working_set_different, solve_divisible,
    working_energy_ratio, DivisibleSolution, IncompatibilityReport, RSearch,
};
pub use error::{Error, Result};
pub use model::{
    energy_divisible_closed_form, energy_of_schedule, makespan_of_schedule, validate_fleet,
    EnergyBreakdown, Fleet, Job, Machine, Regime, Schedule,
};
pub use nondivisible::{solve_nondivisible, BoundCertificate, IdealTarget, LptSchedule};
pub use oracle::{oracle_divisible, oracle_nondivisible, OracleConfig, OracleResult};
pub use ordering::{index_different, index_for_regime, index_identical, IndexedFleet};
