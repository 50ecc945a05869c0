//! Dirichlet heat semigroup.

use crate::error::{out_of_range, Result};
use crate::field::SpectralField;
use crate::spectrum::Spectrum;

/// `e^{t Delta_D} h`, i.e. `h_jk -> exp(-t lambda_jk) h_jk`.
pub fn heat_apply(t: f64, h: &SpectralField) -> Result<SpectralField> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(out_of_range("t", t, "t >= 0"));
    }
    if t == 0.0 {
        return Ok(h.clone());
    }
    Ok(h.map_eigen(|l| (-t * l).exp()))
}

fn check_kernel_args(spectrum: &Spectrum, t: f64, jmax: usize) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(out_of_range("t", t, "t > 0"));
    }
    if jmax == 0 || jmax > spectrum.len() {
        return Err(out_of_range("jmax", jmax as f64, "1 <= jmax <= number of modes"));
    }
    Ok(())
}

/// Truncated eigen-series `sum_{i <= jmax} exp(-t lambda_i) w_i(x) w_i(y)` over
/// the `jmax` lowest modes.
pub fn heat_kernel_eval(spectrum: &Spectrum, x: (f64, f64), y: (f64, f64), t: f64, jmax: usize) -> Result<f64> {
    check_kernel_args(spectrum, t, jmax)?;
    let mut acc = 0.0;
    for &(j, k) in &spectrum.sorted_modes()[..jmax] {
        let wx = spectrum.eigenfunction(j, k, x.0, x.1);
        let wy = spectrum.eigenfunction(j, k, y.0, y.1);
        acc += (-t * spectrum.eigenvalue(j, k)).exp() * (wx * wy);
    }
    Ok(acc)
}

/// `int_Omega H(x, y, t) dx` for the same truncated series, using the exact
/// integral of each eigenfunction.
pub fn heat_kernel_mass(spectrum: &Spectrum, y: (f64, f64), t: f64, jmax: usize) -> Result<f64> {
    check_kernel_args(spectrum, t, jmax)?;
    let norm = spectrum.normalization();
    let mut acc = 0.0;
    for &(j, k) in &spectrum.sorted_modes()[..jmax] {
        if j % 2 == 0 || k % 2 == 0 {
            continue;
        }
        let mass = norm * (2.0 / spectrum.wavenumber_x(j)) * (2.0 / spectrum.wavenumber_y(k));
        acc += (-t * spectrum.eigenvalue(j, k)).exp() * mass * spectrum.eigenfunction(j, k, y.0, y.1);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn heat_multiplier_on_first_mode() {
        let sp = Spectrum::unit_square(4).unwrap();
        let w = SpectralField::single_mode(Arc::clone(&sp), 1, 1, 1.0).unwrap();
        let v = heat_apply(0.1, &w).unwrap();
        assert!((v.coeff(1, 1) - (-0.2 * PI * PI).exp()).abs() < 1e-15);
        assert!((v.coeff(1, 1) - 0.1389).abs() < 1e-4);
        assert_eq!(heat_apply(0.0, &w).unwrap().coeffs(), w.coeffs());
        assert!(heat_apply(-1e-3, &w).is_err());
    }

    #[test]
    fn kernel_boundary_and_symmetry() {
        let sp = Spectrum::unit_square(12).unwrap();
        let n = sp.len();
        assert_eq!(heat_kernel_eval(&sp, (0.0, 0.3), (0.4, 0.6), 0.01, n).unwrap(), 0.0);
        assert!(heat_kernel_eval(&sp, (0.2, 0.3), (0.4, 1.0), 0.01, n).unwrap().abs() < 1e-14);
        let a = heat_kernel_eval(&sp, (0.21, 0.33), (0.47, 0.61), 0.02, n).unwrap();
        let b = heat_kernel_eval(&sp, (0.47, 0.61), (0.21, 0.33), 0.02, n).unwrap();
        assert_eq!(a, b);
        assert!(heat_kernel_eval(&sp, (0.2, 0.2), (0.3, 0.3), 0.0, n).is_err());
        assert!(heat_kernel_eval(&sp, (0.2, 0.2), (0.3, 0.3), 0.1, n + 1).is_err());
    }

    #[test]
    fn kernel_mass_in_unit_interval() {
        let sp = Spectrum::unit_square(24).unwrap();
        for t in [0.005, 0.05, 0.5] {
            for y in [(0.5, 0.5), (0.1, 0.9), (0.03, 0.5)] {
                let m = heat_kernel_mass(&sp, y, t, sp.len()).unwrap();
                assert!((0.0..=1.0).contains(&m), "t={t} y={y:?} mass={m}");
            }
        }
    }
}
