use thiserror::Error;

/// Errors raised by model validation, the solvers and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fleet has no machines")]
    EmptyFleet,
    #[error("machine `{id}` has non-positive speed {upsilon}")]
    NonPositiveSpeed { id: String, upsilon: f64 },
    #[error("machine `{id}` has negative {field} {value}")]
    NegativePower {
        id: String,
        field: &'static str,
        value: f64,
    },
    #[error("`{id}` has a non-finite {field}")]
    NonFinite { id: String, field: &'static str },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("schedule references unknown machine `{0}`")]
    UnknownMachine(String),
    #[error("machine `{id}` works {working_time} which exceeds the makespan {makespan}")]
    NegativeIdleTime {
        id: String,
        working_time: f64,
        makespan: f64,
    },
    #[error("schedule has no machines")]
    EmptySchedule,
    #[error("working-machine count {r} outside 1..={m}")]
    ROutOfRange { r: usize, m: usize },
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("working-energy ratio is undefined (zero denominator)")]
    UndefinedRatio,
    #[error("no jobs given")]
    NoJobs,
    #[error("job `{id}` has non-positive weight {psi}")]
    NonPositiveWeight { id: String, psi: f64 },
    #[error("total work {0} is negative or not finite")]
    InvalidWork(f64),
    #[error("fleet of {m} machines exceeds the subset enumeration limit of {limit}")]
    FleetTooLarge { m: usize, limit: usize },
    #[error("{configurations:e} assignments exceed the enumeration limit of {limit:e}")]
    InstanceTooLarge { configurations: f64, limit: f64 },
    #[error("operation requires the {expected} regime, fleet is indexed for {found}")]
    RegimeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("negative delta for machine index {0}")]
    NegativeDelta(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
