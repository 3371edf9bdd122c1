use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters or operands are inconsistent with each other.
    #[error("configuration error: {0}")]
    Config(String),
    /// A weight evaluated to a non-positive or non-finite value.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    /// An analyzing vector fails the admissibility condition.
    #[error("inadmissible vector: {0}")]
    Inadmissible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
