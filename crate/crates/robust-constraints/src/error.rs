use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AssemblyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid channel data: {0}")]
    InvalidChannels(String),

    #[error("invalid QoS specification: {0}")]
    InvalidQos(String),

    #[error("invalid beamforming direction: {0}")]
    InvalidDirection(String),

    #[error(transparent)]
    Sdp(#[from] sdp_core::SdpError),

    #[error(transparent)]
    Linalg(#[from] hermitian_linalg::LinalgError),
}
