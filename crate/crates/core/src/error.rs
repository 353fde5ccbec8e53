use thiserror::Error;

use crate::space::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("no admissible anchor; blocked constraints: {}", .blocked.join("; "))]
    SearchFailure { blocked: Vec<String> },

    #[error("distance is not a metric ({} violation(s))", .0.violations.len())]
    InvalidMetric(Box<ValidationReport>),

    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown condition id `{0}`")]
    UnknownCondition(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("cannot parse target expression at offset {offset}: {message}")]
    Target { offset: usize, message: String },

    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
