//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by matrix construction, decomposition, and sampling.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two operands (or an operand and a weight) have different dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    /// A matrix expected to be Hermitian has too large a defect to symmetrize away.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// The eigensolver did not reach the off-diagonal threshold within the sweep cap.
    #[error("eigensolver failed to converge within {0} sweeps")]
    Convergence(usize),

    /// A weight matrix must be strictly positive definite.
    #[error("weight matrix is not strictly positive: smallest eigenvalue {0:.3e}")]
    NonPositiveWeight(f64),

    /// A density matrix violated unit trace or positivity.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// A random sample collapsed below numerical resolution even after retries.
    #[error("degenerate sample after {0} attempts")]
    DegenerateSample(usize),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A weighted norm needed as a divisor is zero.
    #[error("zero weighted norm")]
    ZeroNorm,

    /// Vectors required to be orthonormal are not, beyond tolerance.
    #[error("vectors are not orthonormal: {0}")]
    NotOrthonormal(String),

    /// A quantity that must be mathematically real (or nonnegative) came out
    /// with a defect beyond tolerance, indicating a bug or invalid input.
    #[error("numerical defect: {0}")]
    Numerical(String),

    /// Matrix entries must be finite.
    #[error("matrix entries must be finite")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
