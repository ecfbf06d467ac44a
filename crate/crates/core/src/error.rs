use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input outside the physical domain of an operation (off-shell momentum,
    /// massless particle at rest, massive input to a massless-only routine...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Precondition on a matrix argument violated (e.g. non-Hermitian input).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A computed identity failed to hold within tolerance.
    #[error("check `{id}` failed: residual {residual:e} exceeds tolerance {tolerance:e}")]
    CheckFailed {
        id: String,
        residual: f64,
        tolerance: f64,
    },

    /// None of the candidate readings of the printed eigenvector formula
    /// reproduces the numerical eigenspaces.
    #[error("transcription suspect: {0}")]
    TranscriptionSuspect(String),
}
