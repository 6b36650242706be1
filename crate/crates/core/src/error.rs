//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain. Carries the offending
    /// field name so harness callers can surface structured config errors.
    #[error("invalid value for `{field}`: {message}")]
    Domain { field: &'static str, message: String },

    /// Experiment configuration is malformed (unknown experiment, missing or
    /// ill-typed parameter).
    #[error("config error: {0}")]
    Config(String),

    #[error("aggregate requires a non-empty, single-experiment record set: {0}")]
    Aggregate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { field, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
