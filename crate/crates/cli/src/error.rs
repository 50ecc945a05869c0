use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Spectral(#[from] fracsqg_core::SpectralError),
    #[error(transparent)]
    Ineq(#[from] fracsqg_ineqlab::IneqError),
    #[error(transparent)]
    Sqg(#[from] fracsqg_sqg::SqgError),
    #[error(transparent)]
    Attractor(#[from] fracsqg_attractor::AttractorError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
