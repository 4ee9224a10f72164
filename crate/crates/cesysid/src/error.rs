//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by simulation, estimation, and IO.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (non-finite values, bad shapes, bad ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Not enough samples for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Time stamps are not uniformly spaced.
    #[error("non-uniform sampling: {0}")]
    NonUniformSpacing(String),

    /// A tuning parameter is out of its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A term expression could not be parsed against the variable names.
    #[error("term parse error: {0}")]
    TermParse(String),

    /// Term evaluation produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The integrator left the finite domain.
    #[error("integration diverged at step {step} (t = {time}): state became non-finite")]
    Divergence { step: usize, time: f64 },

    /// Two matrices that must be row-aligned are not.
    #[error("alignment error: {0}")]
    Alignment(String),

    /// Malformed configuration (file or flags).
    #[error("config error: {0}")]
    Config(String),

    /// CSV parse failure with the 1-based line it occurred on.
    #[error("{path}:{line}: {msg}")]
    CsvData { path: String, line: u64, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for data/validation problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence { .. } | Error::Evaluation(_) => 3,
            _ => 2,
        }
    }
}
