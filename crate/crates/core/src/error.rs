use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is singular within tolerance")]
    Singular,

    #[error("matrix is not symplectic (max deviation {0:e})")]
    NotSymplectic(f64),

    #[error("matrix is not symmetric (max relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("infeasible power allocation: {0}")]
    Infeasible(String),

    #[error("malformed channel: {0}")]
    MalformedChannel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_nonneg(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and >= 0, got {value}")))
    }
}
