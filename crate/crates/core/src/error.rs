use thiserror::Error;

/// Errors raised by state construction, criteria and chain computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("matrix dimension {0} is not supported (expected 2, 4, 8 or 16)")]
    BadDimension(usize),

    #[error("entry count {got} does not match dimension {dim} (expected {dim}x{dim})")]
    BadShape { dim: usize, got: usize },

    #[error("expected a {expected}-qubit state, got {got} qubits")]
    QubitCount { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid qubit selection: {0}")]
    BadQubits(String),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("zero-probability branch (probability {0:e}); post-measurement state is undefined")]
    ZeroProbabilityBranch(f64),

    #[error("closed form is singular at alpha = {alpha}: {reason}")]
    Singular { alpha: f64, reason: &'static str },

    #[error("closed-form weight {value} lies outside [0, 1]")]
    OutOfModel { value: f64 },

    #[error("invalid scan grid: {0}")]
    BadGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
