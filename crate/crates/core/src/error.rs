use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, HnError>;

#[derive(Debug, Clone, Error)]
pub enum HnError {
    /// An argument lies outside the set on which a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Quadrature gave up before meeting its tolerance; the best estimate is kept.
    #[error(
        "quadrature did not converge after {panels} panels (estimate {value}, error estimate {error_estimate:.3e})"
    )]
    NotConverged {
        value: Complex64,
        error_estimate: f64,
        panels: usize,
    },

    /// A limit extrapolation did not settle.
    #[error("limit did not converge: {0}")]
    NoConvergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),
}

impl HnError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HnError::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        HnError::Precondition(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        HnError::Input(msg.into())
    }
}

impl From<serde_json::Error> for HnError {
    fn from(e: serde_json::Error) -> Self {
        HnError::Input(e.to_string())
    }
}

impl From<std::io::Error> for HnError {
    fn from(e: std::io::Error) -> Self {
        HnError::Input(e.to_string())
    }
}
