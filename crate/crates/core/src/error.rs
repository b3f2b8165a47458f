use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order {0} is outside the open interval (1,2)")]
    InvalidOrder(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),

    #[error("size {size} exceeds the dense limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("preconditioner eigenvalue {index} is not positive ({value:e})")]
    NonPositivePreconditioner { index: usize, value: f64 },

    #[error("non-finite value encountered at PCG iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("PCG did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("unknown problem id {0} (expected 1..=5)")]
    UnknownProblem(u32),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors raised by the linear solver rather than by input validation.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::NotConverged { .. } | Error::NonPositivePreconditioner { .. }
        )
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
