use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid rectangle: lx = {lx}, ly = {ly} (both sides must be finite and positive)")]
    InvalidDomain { lx: f64, ly: f64 },
    #[error("mode counts must be at least 1 (got nx = {nx}, ny = {ny})")]
    ZeroModes { nx: usize, ny: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("{what} = {value} is out of range: requires {constraint}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("fields live on different spectra")]
    SpectrumMismatch,
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("coincident sample pair at ({x}, {y}); K_s is undefined on the diagonal")]
    CoincidentPair { x: f64, y: f64 },
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

pub(crate) fn out_of_range(what: &'static str, value: f64, constraint: &'static str) -> SpectralError {
    SpectralError::OutOfRange {
        what,
        value,
        constraint,
    }
}
