use fracsqg_core::SpectralError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IneqError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{what} = {value} is out of range: requires {constraint}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("convex function outside the catalogue: {0}")]
    UnsupportedPhi(String),
    #[error("input field takes the negative value {0}")]
    NegativeInput(f64),
}

pub type Result<T> = std::result::Result<T, IneqError>;

pub(crate) fn out_of_range(what: &'static str, value: f64, constraint: &'static str) -> IneqError {
    IneqError::OutOfRange {
        what,
        value,
        constraint,
    }
}
