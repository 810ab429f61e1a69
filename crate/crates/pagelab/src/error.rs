use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A page rank or range endpoint is out of bounds.
    #[error("index error: {0}")]
    Index(String),

    /// The instance exceeds the limits of an exhaustive search.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// An estimator has no data to report (e.g. a zero denominator).
    #[error("undefined: {0}")]
    Undefined(String),

    /// A trace line could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn index(msg: impl Into<String>) -> Self {
        Error::Index(msg.into())
    }
}
