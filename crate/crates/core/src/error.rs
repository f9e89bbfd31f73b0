use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("oracle violation: {0}")]
    OracleViolation(String),
    #[error("fixed-point overflow: {value} does not fit below 2^{limit_exp}")]
    Overflow { value: f64, limit_exp: u32 },
    #[error("input is not an eigenstate (residual {residual:e})")]
    NotEigenstate { residual: f64 },
    #[error("estimation failed at level {level}: {reason} (partial estimate {partial})")]
    EstimationFailure {
        level: u32,
        partial: f64,
        reason: String,
    },
    #[error("pole of zeta at s = 1")]
    Pole,
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("zeta too close to zero (|zeta| = {0:e})")]
    NearZero(f64),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
