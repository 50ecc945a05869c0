//! Diagonal operators of the Dirichlet Laplacian and their integral
//! representations.
//!
//! Everything that acts on a [`SpectralField`] here is a per-mode multiplier.
//! The time-integral paths (heat-semigroup quadrature, truncated
//! representation, kernels) exist so the multipliers can be checked against
//! something computed a different way.

mod heat;
mod kernel;
mod mollifier;
mod riesz;
mod truncated;

use ndarray::Array2;

use crate::error::{out_of_range, Result};
use crate::field::SpectralField;
use crate::spectrum::Spectrum;

pub use heat::{heat_apply, heat_kernel_eval, heat_kernel_mass};
pub use kernel::{
    complement_1d, heat_kernel_1d, heat_kernel_rect, kernel_assemble, representation_check, KernelTable,
    RepresentationReport, SamplePair,
};
pub use mollifier::{mollifier_multiplier, mollifier_table, mollify, mollify_via_heat_semigroup};
pub use riesz::{advect, divergence, riesz_perp, VelocityCoefficients};
pub use truncated::{fractional_constant, truncated_fractional, truncated_multiplier};

/// `Lambda^s h`: multiplies mode `(j, k)` by `lambda_jk^(s/2)`.
pub fn apply_fractional(s: f64, h: &SpectralField) -> SpectralField {
    if s == 0.0 {
        return h.clone();
    }
    let half = 0.5 * s;
    h.map_eigen(|l| l.powf(half))
}

/// A diagonal operator described by its symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierSpec {
    /// `lambda^(s/2)` for any real `s`.
    FractionalPower { s: f64 },
    /// `exp(-t lambda)`, `t >= 0`.
    Heat { t: f64 },
    /// Logarithmic heat average over `[eps, 1/eps]`, `eps` in `(0, 1)`.
    Mollifier { eps: f64 },
    /// `Lambda^s` with the time integral cut at `eta`.
    Truncated { s: f64, eta: f64 },
}

impl MultiplierSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::FractionalPower { s } if !s.is_finite() => Err(out_of_range("s", s, "s finite")),
            Self::Heat { t } if !(t >= 0.0 && t.is_finite()) => Err(out_of_range("t", t, "t >= 0")),
            Self::Mollifier { eps } if !(eps > 0.0 && eps < 1.0) => {
                Err(out_of_range("eps", eps, "eps in (0,1)"))
            }
            Self::Truncated { s, .. } if !(s > 0.0 && s < 2.0) => Err(out_of_range("s", s, "s in (0,2)")),
            Self::Truncated { eta, .. } if !(eta > 0.0 && eta < 1.0) => {
                Err(out_of_range("eta", eta, "eta in (0,1)"))
            }
            _ => Ok(()),
        }
    }

    /// Symbol value at one eigenvalue.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            Self::FractionalPower { s } => Ok(lambda.powf(0.5 * s)),
            Self::Heat { t } => Ok((-t * lambda).exp()),
            Self::Mollifier { eps } => mollifier_multiplier(eps, lambda),
            Self::Truncated { s, eta } => truncated_multiplier(s, eta, fractional_constant(s)?, lambda),
        }
    }

    /// Symbol tabulated over every mode of `spectrum`.
    pub fn table(&self, spectrum: &Spectrum) -> Result<Array2<f64>> {
        self.validate()?;
        match *self {
            Self::Mollifier { eps } => mollifier_table(eps, spectrum),
            Self::Truncated { s, eta } => truncated::truncated_table(s, eta, spectrum),
            _ => Ok(spectrum.eigenvalues().mapv(|l| self.eval(l).unwrap_or(f64::NAN))),
        }
    }
}

/// Applies the operator described by `spec` to `h`.
pub fn apply_multiplier(spec: &MultiplierSpec, h: &SpectralField) -> Result<SpectralField> {
    let table = spec.table(h.spectrum())?;
    Ok(h.apply_table(table.view()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn fractional_power_on_first_mode() {
        let sp = Spectrum::unit_square(6).unwrap();
        let w = SpectralField::single_mode(Arc::clone(&sp), 1, 1, 1.0).unwrap();
        let lw = apply_fractional(2.0, &w);
        assert!((lw.coeff(1, 1) - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(apply_fractional(0.0, &w).coeffs(), w.coeffs());
        let back = apply_fractional(-1.0, &apply_fractional(1.0, &lw));
        assert!((back.coeff(1, 1) - lw.coeff(1, 1)).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(MultiplierSpec::Heat { t: -1.0 }.validate().is_err());
        assert!(MultiplierSpec::Mollifier { eps: 1.0 }.validate().is_err());
        assert!(MultiplierSpec::Mollifier { eps: 0.0 }.validate().is_err());
        assert!(MultiplierSpec::Truncated { s: 2.0, eta: 0.1 }.validate().is_err());
        assert!(MultiplierSpec::Truncated { s: 1.0, eta: 1.0 }.validate().is_err());
        assert!(MultiplierSpec::FractionalPower { s: -3.7 }.validate().is_ok());
        assert!(MultiplierSpec::FractionalPower { s: f64::NAN }.validate().is_err());
    }

    #[test]
    fn apply_multiplier_matches_direct_paths() {
        let sp = Spectrum::unit_square(8).unwrap();
        let h = SpectralField::from_mode_fn(Arc::clone(&sp), |j, k, _| 1.0 / (j * j + k) as f64).unwrap();
        let a = apply_multiplier(&MultiplierSpec::FractionalPower { s: 0.7 }, &h).unwrap();
        let b = apply_fractional(0.7, &h);
        assert!((&a - &b).l2_norm() < 1e-14);
        let a = apply_multiplier(&MultiplierSpec::Heat { t: 0.01 }, &h).unwrap();
        let b = heat_apply(0.01, &h).unwrap();
        assert!((&a - &b).l2_norm() < 1e-14);
    }
}
