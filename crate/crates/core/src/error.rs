use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e}, energy {energy:.12e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        energy: f64,
    },

    #[error("functional unbounded below: {0}")]
    UnboundedBelow(String),

    #[error("kernel resolution: {0}")]
    Resolution(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, err: impl FnOnce() -> Error) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

pub(crate) fn positive(name: &str, value: f64) -> Result<()> {
    ensure(value.is_finite() && value > 0.0, || {
        Error::InvalidParameter(format!("{name} must be finite and > 0, got {value}"))
    })
}
