use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("capacity exceeded: {requested} entries requested, cap is {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("kernel returned non-finite value {value} at entry ({i}, {j})")]
    KernelNonFinite { i: usize, j: usize, value: f64 },

    #[error("kernel undefined at {point} while building matrix {matrix} (entry ({i}, {j}))")]
    Domain {
        matrix: &'static str,
        i: usize,
        j: usize,
        point: f64,
    },

    #[error("kernel smoothness order {available} is below the required order {required}")]
    UnsupportedOrder { required: u8, available: u8 },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge for eigenvalue {index} within {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("{check} inequality violated on {pair}: lhs {lhs} > rhs {rhs}")]
    InequalityViolation {
        check: &'static str,
        pair: String,
        lhs: f64,
        rhs: f64,
    },

    #[error("malformed dataset at line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error("cannot write to {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::Capacity { .. } => "capacity",
            Error::KernelNonFinite { .. } => "kernel_non_finite",
            Error::Domain { .. } => "domain",
            Error::UnsupportedOrder { .. } => "unsupported_order",
            Error::NonFinite(_) => "non_finite",
            Error::Empty(_) => "empty",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NoConvergence { .. } => "solver",
            Error::InequalityViolation { .. } => "inequality_violation",
            Error::Dataset { .. } => "dataset",
            Error::Output { .. } => "output",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Toml(_) => "config_parse",
        }
    }
}
