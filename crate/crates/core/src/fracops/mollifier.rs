//! Heat-semigroup mollifier `J_eps = (1/ln(1/eps)) int_eps^{1/eps} e^{t Delta_D} dt/t`.

use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{out_of_range, Result, SpectralError};
use crate::field::{PhysicalField, SpectralField};
use crate::fracops::heat_apply;
use crate::quadrature::{gauss_legendre, log_time};
use crate::spectrum::Spectrum;

const REL_TOL: f64 = 1e-13;

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(out_of_range("eps", eps, "eps in (0,1)"))
    }
}

/// `m_eps(lambda) = (1/ln(1/eps)) int_eps^{1/eps} exp(-t lambda) dt/t`, a value in `(0, 2)`.
pub fn mollifier_multiplier(eps: f64, lambda: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(out_of_range("lambda", lambda, "lambda > 0"));
    }
    let g = |t: f64| (-lambda * t).exp() / t;
    // Past eps + 50/lambda the integrand is below e^-50 of its value at eps.
    let t_hi = (1.0 / eps).min(eps + 50.0 / lambda);
    let t_c = (1.0 / lambda).clamp(eps, t_hi);
    let integral = log_time(&g, eps, t_c, REL_TOL)? + log_time(&g, t_c, t_hi, REL_TOL)?;
    Ok(integral / (1.0 / eps).ln())
}

/// `m_eps(lambda_jk)` for every mode, indexed `[j-1, k-1]`.
pub fn mollifier_table(eps: f64, spectrum: &Spectrum) -> Result<Array2<f64>> {
    check_eps(eps)?;
    let ev: Vec<f64> = spectrum.eigenvalues().iter().copied().collect();
    let vals = ev
        .par_iter()
        .map(|&l| mollifier_multiplier(eps, l))
        .collect::<Result<Vec<f64>>>()?;
    Array2::from_shape_vec(spectrum.shape(), vals).map_err(|e| SpectralError::Quadrature(e.to_string()))
}

/// `J_eps h` applied mode by mode.
pub fn mollify(eps: f64, h: &SpectralField) -> Result<SpectralField> {
    let table = mollifier_table(eps, h.spectrum())?;
    Ok(h.apply_table(table.view()))
}

/// `J_eps h` assembled on the grid as a time quadrature of heat-semigroup
/// snapshots: fixed 16-point Gauss-Legendre panels of width at most 1/4 in
/// `u = ln t`, each node contributing `e^{t Delta_D} h` in physical space.
pub fn mollify_via_heat_semigroup(eps: f64, h: &SpectralField) -> Result<PhysicalField> {
    check_eps(eps)?;
    let half_width = (1.0 / eps).ln();
    let panels = (2.0 * half_width / 0.25).ceil() as usize;
    let width = 2.0 * half_width / panels as f64;
    let (nodes, weights) = gauss_legendre(16);
    let mut acc = Array2::<f64>::zeros(h.spectrum().grid_shape());
    for p in 0..panels {
        let mid = -half_width + (p as f64 + 0.5) * width;
        for (x, w) in nodes.iter().zip(&weights) {
            let t = (mid + 0.5 * width * x).exp();
            let snapshot = heat_apply(t, h)?.to_physical();
            acc.scaled_add(0.5 * width * w, &snapshot.values());
        }
    }
    acc /= half_width;
    PhysicalField::new(Arc::clone(h.spectrum()), acc)
}
