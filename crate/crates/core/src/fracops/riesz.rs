//! Rotated Riesz transform `R^perp = grad^perp Lambda^{-1}` and the advection
//! product built on it.

use std::sync::Arc;

use ndarray::{Array2, Zip};

use crate::error::{Result, SpectralError};
use crate::field::{PhysicalVectorField, SpectralField};
use crate::spectrum::Spectrum;
use crate::transform::Parity;

/// Velocity `u = (-d_y psi, d_x psi)` with `psi = Lambda^{-1} q`, kept as
/// coefficients: `x` is a sine-cosine series and `y` a cosine-sine series,
/// both orthonormal.
#[derive(Debug, Clone)]
pub struct VelocityCoefficients {
    spectrum: Arc<Spectrum>,
    x: Array2<f64>,
    y: Array2<f64>,
}

impl VelocityCoefficients {
    pub fn from_scalar(q: &SpectralField) -> Self {
        let sp = q.spectrum();
        let psi = q.map_eigen(|l| 1.0 / l.sqrt());
        let c = psi.coeffs();
        let x = Array2::from_shape_fn(sp.shape(), |(a, b)| -sp.wavenumber_y(b + 1) * c[[a, b]]);
        let y = Array2::from_shape_fn(sp.shape(), |(a, b)| sp.wavenumber_x(a + 1) * c[[a, b]]);
        Self {
            spectrum: Arc::clone(sp),
            x,
            y,
        }
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn x(&self) -> ndarray::ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ndarray::ArrayView2<'_, f64> {
        self.y.view()
    }

    /// `||u||_{L^2}` from the coefficients.
    pub fn l2_norm(&self) -> f64 {
        Zip::from(&self.x)
            .and(&self.y)
            .fold(0.0, |acc, a, b| acc + a * a + b * b)
            .sqrt()
    }

    /// Nodal velocity on the collocation grid.
    pub fn to_physical(&self) -> PhysicalVectorField {
        let sp = &self.spectrum;
        PhysicalVectorField::from_parts(
            Arc::clone(sp),
            sp.synthesize(self.x.view(), Parity::Sine, Parity::Cosine),
            sp.synthesize(self.y.view(), Parity::Cosine, Parity::Sine),
        )
    }
}

/// `u = R^perp q` on the grid.
pub fn riesz_perp(q: &SpectralField) -> PhysicalVectorField {
    VelocityCoefficients::from_scalar(q).to_physical()
}

/// Cosine-cosine coefficients of `div u`, computed mode by mode.
pub fn divergence(u: &VelocityCoefficients) -> Array2<f64> {
    let sp = &u.spectrum;
    Array2::from_shape_fn(sp.shape(), |(a, b)| {
        sp.wavenumber_x(a + 1) * u.x[[a, b]] + sp.wavenumber_y(b + 1) * u.y[[a, b]]
    })
}

/// Dealiased sine projection of the nodal product `u . grad_b`.
///
/// Both arguments are nodal fields on the same grid; `u` is typically
/// [`riesz_perp`] output and `grad_b` a [`SpectralField::gradient`].
pub fn advect(u: &PhysicalVectorField, grad_b: &PhysicalVectorField) -> Result<SpectralField> {
    let sp = u.spectrum();
    if !sp.compatible(grad_b.spectrum()) {
        return Err(SpectralError::SpectrumMismatch);
    }
    let prod = u.dot(grad_b)?;
    let mut out = prod.to_spectral();
    out.dealias();
    Ok(out)
}
