use crate::numerics::quadrature::QuadratureResult;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge (value {value:e}, error estimate {error:e}, {evaluations} evaluations)",
        value = partial.value, error = partial.error_estimate, evaluations = partial.evaluations)]
    Convergence {
        what: String,
        partial: QuadratureResult,
    },

    #[error("trajectory terminated at t = {t}: {reason}")]
    Trajectory { t: f64, x: f64, reason: String },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("internal consistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn scenario(msg: impl Into<String>) -> Self {
        Error::Scenario(msg.into())
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
