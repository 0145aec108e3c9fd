use thiserror::Error;

/// Errors raised by the engine.
///
/// `Config` names the offending field so scenario loaders can report it
/// verbatim; `Domain` and `Range` come from evaluating the surfaces or the
/// grid outside their valid region.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("trace I/O: {0}")]
    Trace(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
