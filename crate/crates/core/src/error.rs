use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Infeasibility of a perfect committee is a result, not an error; see
/// [`crate::solvers::PerfectOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("schema violation: {0}")]
    SchemaViolation(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("over-allocation: floors of ideal seats sum to {floors}, exceeding {seats} seats")]
    OverAllocation { floors: u64, seats: u64 },

    #[error("cannot distribute {remaining} leftover seats among {parties} parties")]
    Unallocatable { remaining: u64, parties: usize },

    #[error("insufficient supply for value `{value}`: need {needed}, database has {available}")]
    Supply {
        value: String,
        needed: usize,
        available: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed} nodes, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("no committee of size {k} exists among {m} candidates")]
    NoCommittee { k: usize, m: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
