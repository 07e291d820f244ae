use thiserror::Error;

/// Errors shared across the library. Display output starts with the error
/// name so callers (and the CLI) can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonPrime: {0} is not a prime number")]
    NonPrime(u64),
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("SingularMatrix: matrix is singular")]
    SingularMatrix,
    #[error("ZeroPivot: entry at row {row}, column {col} is zero")]
    ZeroPivot { row: usize, col: usize },
    #[error("NotSpecialLinear: determinant is {det}, expected 1")]
    NotSpecialLinear { det: String },
    #[error("InvalidFamilyParams: {0}")]
    InvalidFamilyParams(String),
    #[error("ZeroVector: norm of the zero vector is not represented")]
    ZeroVector,
    #[error("PrecisionLoss: residual {residual:e} exceeds tolerance {tolerance:e}")]
    PrecisionLoss { residual: f64, tolerance: f64 },
    #[error("ParseError: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
