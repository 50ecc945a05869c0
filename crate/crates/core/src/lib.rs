//! Spectral substrate for fractional powers of the Dirichlet Laplacian on a
//! rectangle: geometry, the sine eigenbasis and its fast transforms, scalar
//! fields in coefficient and grid space, and the fractional operator family.

pub mod domain;
pub mod error;
pub mod field;
pub mod fracops;
pub mod generators;
pub mod quadrature;
pub mod spectrum;
mod transform;

pub use domain::RectDomain;
pub use error::{Result, SpectralError};
pub use field::{PhysicalField, PhysicalVectorField, SpectralField};
pub use spectrum::Spectrum;
pub use transform::Parity;
