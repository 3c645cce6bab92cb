use thiserror::Error;

/// Errors produced by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration failed near x = {x}: {reason}")]
    Integration { x: f64, reason: String },

    #[error("could not localize eigenvalue {n}: {reason}")]
    Localization { n: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The boundary pair lies on the zero curve, where the first eigenvalue
    /// vanishes for every density and first-eigenvalue uniqueness fails.
    #[error(
        "boundary pair (alpha = {alpha}, beta = {beta}) lies on the zero curve \
         cos(alpha)cos(beta) - sin(alpha - beta) = 0; lambda_0 = 0 for every density there, \
         so first-eigenvalue uniqueness conditions are void"
    )]
    CurveExcluded { alpha: f64, beta: f64 },

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
