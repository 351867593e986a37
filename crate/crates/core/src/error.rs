use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid vertex count {n}: {reason}")]
    InvalidOrder { n: usize, reason: &'static str },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("pair ({u}, {v}) is not canonical; expected u < v")]
    NonCanonicalPair { u: usize, v: usize },

    #[error("conflicting orientation recorded for pair ({u}, {v})")]
    Conflict { u: usize, v: usize },

    #[error("budget {budget} exceeds the {pairs} pairs available")]
    InvalidBudget { budget: usize, pairs: usize },

    #[error("inquiry budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("{unknown} unknown pairs exceed the enumeration threshold of {threshold}")]
    ThresholdExceeded { unknown: usize, threshold: usize },

    #[error("n = {n} is beyond solver capability (max {max})")]
    BeyondCapability { n: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
