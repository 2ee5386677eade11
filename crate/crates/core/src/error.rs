use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian (max entrywise deviation {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    #[error("trace {trace:.12} outside [1 - {tolerance:.1e}, 1]")]
    TraceOutOfRange { trace: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// Probability weight lost beyond the top Fock level exceeds the trace tolerance.
    #[error("truncation leakage {deficit:.3e} exceeds tolerance {tolerance:.1e}; increase the Fock cutoff")]
    Truncation { deficit: f64, tolerance: f64 },

    #[error("near-singular Gram matrix (min eigenvalue {min_eigenvalue:.3e}); displacement too small to separate branches")]
    DegenerateBasis { min_eigenvalue: f64 },

    #[error("channel construction failed: {0}")]
    Channel(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl Error {
    /// True for failures of numerical tolerances (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter(_) | Error::DimensionMismatch { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
