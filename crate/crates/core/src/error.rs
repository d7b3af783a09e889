use thiserror::Error;

/// Errors raised by the numerical kernel, the correlation measures and the
/// spin models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcorrError {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace deviates from 1 by {deviation:e}")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("Boltzmann factor overflow: {0}")]
    Overflow(String),

    #[error("domain error: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, QcorrError>;
