use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SdpError {
    #[error("problem validation failed: {0}")]
    InvalidProblem(String),

    #[error("solver configuration invalid: {0}")]
    InvalidConfig(String),

    #[error("linear algebra failure: {0}")]
    Linalg(#[from] hermitian_linalg::LinalgError),
}
