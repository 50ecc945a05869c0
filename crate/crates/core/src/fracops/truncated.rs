//! `Lambda^s` through its heat-semigroup integral, cut off at small times.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{out_of_range, Result, SpectralError};
use crate::field::SpectralField;
use crate::quadrature::log_time;
use crate::spectrum::Spectrum;

const REL_TOL: f64 = 1e-12;
/// Below this time the normalizing integral is summed as a power series.
const SERIES_CUT: f64 = 1e-4;
/// Beyond `TAIL / lambda` the factor `1 - exp(-lambda t)` equals 1 to within `e^-60`.
const TAIL: f64 = 60.0;

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 2.0 {
        Ok(())
    } else {
        Err(out_of_range("s", s, "s in (0,2)"))
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(out_of_range("eta", eta, "eta in (0,1)"))
    }
}

/// `c_s` from `1 = c_s int_0^inf (1 - e^{-t}) t^{-1-s/2} dt`, by quadrature.
pub fn fractional_constant(s: f64) -> Result<f64> {
    check_s(s)?;
    let a = 0.5 * s;
    let d = SERIES_CUT;
    let mut head = 0.0;
    let mut fact = 1.0;
    for n in 1..20 {
        fact *= n as f64;
        let nf = n as f64;
        let term = d.powf(nf - a) / (fact * (nf - a));
        head += if n % 2 == 1 { term } else { -term };
        if term < 1e-20 * head.abs() {
            break;
        }
    }
    let g = |t: f64| -(-t).exp_m1() * t.powf(-1.0 - a);
    let mid = log_time(&g, d, 1.0, REL_TOL)? + log_time(&g, 1.0, TAIL, REL_TOL)?;
    let tail = TAIL.powf(-a) / a;
    Ok(1.0 / (head + mid + tail))
}

/// `c_s int_eta^inf (1 - exp(-lambda t)) t^{-1-s/2} dt` with a caller-supplied `c_s`.
pub fn truncated_multiplier(s: f64, eta: f64, c_s: f64, lambda: f64) -> Result<f64> {
    check_s(s)?;
    check_eta(eta)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(out_of_range("lambda", lambda, "lambda >= 0"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let a = 0.5 * s;
    let g = |t: f64| -(-lambda * t).exp_m1() * t.powf(-1.0 - a);
    let t_end = eta.max(TAIL / lambda);
    let t_c = (1.0 / lambda).clamp(eta, t_end);
    let body = log_time(&g, eta, t_c, REL_TOL)? + log_time(&g, t_c, t_end, REL_TOL)?;
    Ok(c_s * (body + t_end.powf(-a) / a))
}

pub(crate) fn truncated_table(s: f64, eta: f64, spectrum: &Spectrum) -> Result<Array2<f64>> {
    let c_s = fractional_constant(s)?;
    check_eta(eta)?;
    let ev: Vec<f64> = spectrum.eigenvalues().iter().copied().collect();
    let vals = ev
        .par_iter()
        .map(|&l| truncated_multiplier(s, eta, c_s, l))
        .collect::<Result<Vec<f64>>>()?;
    Array2::from_shape_vec(spectrum.shape(), vals).map_err(|e| SpectralError::Quadrature(e.to_string()))
}

/// `(Lambda^s)_eta f`, the time integral of `f - e^{t Delta_D} f` over `t > eta`.
pub fn truncated_fractional(s: f64, eta: f64, f: &SpectralField) -> Result<SpectralField> {
    let table = truncated_table(s, eta, f.spectrum())?;
    Ok(f.apply_table(table.view()))
}
