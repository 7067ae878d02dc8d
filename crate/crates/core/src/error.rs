use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A non-oblivious promise (an error cap, a lie budget) was broken.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("no feasible witness: {0}")]
    NoWitness(String),

    /// A probed policy accepted some day-1 price but rejected a higher one.
    #[error("not a threshold policy: {0}")]
    NonThresholdPolicy(String),

    /// The requested theoretical guarantee does not exist for these parameters.
    #[error("no guarantee available: {0}")]
    GuaranteeUnavailable(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("empty series")]
    EmptySeries,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
