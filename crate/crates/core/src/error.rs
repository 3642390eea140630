use thiserror::Error;

/// Errors raised by the numerical kernels and the run orchestration.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or summation did not reach its tolerance.
    #[error("numerical failure: {what} (achieved error estimate {estimate:e})")]
    Numerical { what: String, estimate: f64 },

    /// Malformed user input (law tokens, config files, flags).
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(what: impl Into<String>, estimate: f64) -> Self {
        Error::Numerical {
            what: what.into(),
            estimate,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
