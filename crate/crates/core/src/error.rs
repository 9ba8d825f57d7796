use thiserror::Error;

/// Errors raised by the core library.
///
/// The variants split into two families: violations of an operation's
/// preconditions (bad parameters, poles, mismatched dimensions) and internal
/// failures (a constructive step that must always succeed did not). The CLI
/// maps the first family to a configuration exit code and the second to an
/// internal-error exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("multi-index must have at least one entry")]
    EmptyIndex,

    #[error("negative entry in {what}: {value}")]
    NegativeEntry { what: &'static str, value: String },

    #[error("{0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("pole at point: {factor} vanishes (k = {k})")]
    Pole { factor: String, k: String },

    #[error("grid exhausted: {0}")]
    GridExhausted(String),

    #[error("series constant term is not a unit")]
    NonUnit,

    #[error("inconsistent factorization: {0}")]
    InconsistentFactorization(String),

    #[error("no balanced prefix pair for u = \"{u}\", v = \"{v}\"")]
    NoBalancedPair { u: String, v: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate bad input rather than a defect.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::NoBalancedPair { .. } | Error::Internal(_))
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
