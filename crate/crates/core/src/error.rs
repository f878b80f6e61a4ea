use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Cholesky factorisation hit a non-positive pivot (0-based index).
    #[error("matrix is not positive definite: decomposition failed at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    #[error("matrix is not symmetric (max relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// 1-based column number.
    #[error("column {column} is constant and cannot be standardized")]
    ConstantColumn { column: usize },

    #[error("insufficient draws for node {node}: need at least {needed}, have {found}")]
    InsufficientDraws {
        node: usize,
        needed: usize,
        found: usize,
    },

    #[error("chain failed at iteration {iteration}: {source}")]
    ChainFailure {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Short machine-readable tag, used by the CLI's JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::ConstantColumn { .. } => "constant_column",
            Error::InsufficientDraws { .. } => "insufficient_draws",
            Error::ChainFailure { .. } => "chain_failure",
            Error::Usage(_) => "usage",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Json { .. } => "json",
        }
    }
}
