use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (lambda_min {lambda_min:.3e})")]
    NotPsd { lambda_min: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
