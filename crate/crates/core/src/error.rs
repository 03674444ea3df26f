use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("integrand returned NaN at x = {at}")]
    NanIntegrand { at: f64 },

    #[error("{context}: quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    NotConverged { context: String, estimate: f64, error: f64 },

    #[error("amplitude is nonzero at |x|^2 + |y|^2 = {radius_sq} >= C = {bound}")]
    SupportViolation { radius_sq: f64, bound: f64 },

    #[error("amplitude vanishes on every sample inside the support")]
    ZeroAmplitude,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
