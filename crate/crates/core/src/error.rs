use thiserror::Error;

/// Errors raised by the library and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A mathematical precondition of the operation does not hold.
    /// `certificate` carries the evidence when one was computed.
    #[error("precondition failed: {message}{}", certificate.as_ref().map(|c| format!(" [{c}]")).unwrap_or_default())]
    Precondition {
        message: String,
        certificate: Option<String>,
    },

    /// The request is larger than the exact computation will handle.
    #[error("size limit: {0}")]
    Size(String),

    /// Invalid configuration document; `path` names the offending field.
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition {
            message: msg.into(),
            certificate: None,
        }
    }

    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: msg.into(),
        }
    }

    /// True for errors that report a violated precondition or invalid input
    /// rather than a failed check.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
