use num_bigint::BigInt;
use thiserror::Error;

use crate::transform::ExhaustedTransform;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A sequence prefix is shorter than an operation needs. `required` is
    /// the minimum prefix length that would let the call succeed.
    #[error("sequence prefix too short: need length {required}, have {available}")]
    PrefixTooShort { required: BigInt, available: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no integer solution of A x = (a, ..., a) exists for a = 1; constant-image hypothesis fails")]
    ConstantImageUnsolvable,

    #[error("witness oracle exhausted its budget ({} g functions, {} candidates examined)", .0.distinct_g.len(), .0.examined)]
    OracleExhausted(Box<ExhaustedTransform>),

    #[error("search exhausted: {0}")]
    Exhausted(String),

    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
