use fracsqg_core::SpectralError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SqgError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("CFL violated at t = {t}: max|u| = {max_u}, dt = {dt}, number = {number} > {limit}")]
    Cfl {
        t: f64,
        max_u: f64,
        dt: f64,
        number: f64,
        limit: f64,
    },
    #[error("non-finite coefficient after the step ending at t = {t}")]
    Divergence { t: f64 },
    #[error("{0}")]
    Diagnostics(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SqgError>;
