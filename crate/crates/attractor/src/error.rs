use fracsqg_core::SpectralError;
use fracsqg_sqg::SqgError;
use thiserror::Error;

use crate::volume::VolumeTrace;

#[derive(Debug, Error)]
pub enum AttractorError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Sqg(#[from] SqgError),
    #[error("invalid input: {0}")]
    Config(String),
    #[error("degenerate bundle: tangent {index} has normalizer {normalizer:e} against scale {scale:e}")]
    Degenerate { index: usize, normalizer: f64, scale: f64 },
    #[error("bundle is not orthonormal in D(Lambda): max |G - I| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },
    #[error("volume run aborted at t = {t}: {reason}")]
    Aborted { t: f64, reason: String, partial: Vec<VolumeTrace> },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AttractorError>;

pub(crate) fn config(msg: impl Into<String>) -> AttractorError {
    AttractorError::Config(msg.into())
}
