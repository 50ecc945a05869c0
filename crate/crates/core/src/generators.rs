//! Reproducible test fields.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{out_of_range, Result};
use crate::field::{PhysicalField, SpectralField};
use crate::spectrum::Spectrum;

/// Gaussian coefficients on modes `j <= band.0`, `k <= band.1`, scaled by
/// `(lambda_jk / lambda_1)^(-decay/2)`. Identical `(seed, band, decay)` give
/// identical fields at every resolution that holds the band.
pub fn random_band_limited(spectrum: &Arc<Spectrum>, seed: u64, band: (usize, usize), decay: f64) -> Result<SpectralField> {
    if band.0 == 0 || band.1 == 0 || band.0 > spectrum.nx() || band.1 > spectrum.ny() {
        return Err(out_of_range("band", band.0.max(band.1) as f64, "1 <= band <= modes per axis"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l1 = spectrum.lambda_min();
    SpectralField::from_mode_fn(Arc::clone(spectrum), |j, k, l| {
        // Draw only inside the band so the stream does not depend on the resolution.
        if j <= band.0 && k <= band.1 {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * (l / l1).powf(-0.5 * decay)
        } else {
            0.0
        }
    })
}

/// `S(x)S(y)(1 + 0.4 cos(pi x/Lx) - 0.3 cos(pi y/Ly))` with `S = sin^3`,
/// which lives on modes `j, k <= 4` and vanishes to third order at the
/// boundary. Used where lattice quadratures need a field without a boundary
/// layer.
pub fn cubic_edge_field(spectrum: &Arc<Spectrum>) -> Result<SpectralField> {
    if spectrum.nx() < 4 || spectrum.ny() < 4 {
        return Err(out_of_range("modes", spectrum.nx().min(spectrum.ny()) as f64, "at least 4 modes per axis"));
    }
    // sin^3 u = (3 sin u - sin 3u)/4 and sin^3 u cos u = (2 sin 2u - sin 4u)/8.
    let a = |j: usize| match j {
        1 => 0.75,
        3 => -0.25,
        _ => 0.0,
    };
    let b = |j: usize| match j {
        2 => 0.25,
        4 => -0.125,
        _ => 0.0,
    };
    let scale = spectrum.domain().area().sqrt() / 2.0;
    SpectralField::from_mode_fn(Arc::clone(spectrum), |j, k, _| {
        scale * (a(j) * a(k) + 0.4 * b(j) * a(k) - 0.3 * a(j) * b(k))
    })
}

fn bump_profile(r2: f64) -> f64 {
    if r2 < 1.0 {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// `amp * exp(1 - 1/(1 - |x-c|^2/r^2))`, sampled on the grid and projected.
pub fn bump(spectrum: &Arc<Spectrum>, center: (f64, f64), radius: f64, amp: f64) -> Result<SpectralField> {
    if !(radius > 0.0) {
        return Err(out_of_range("radius", radius, "radius > 0"));
    }
    let f = PhysicalField::from_fn(Arc::clone(spectrum), |x, y| {
        let r2 = ((x - center.0).powi(2) + (y - center.1).powi(2)) / (radius * radius);
        amp * bump_profile(r2)
    })?;
    Ok(f.to_spectral())
}

/// Bump multiplied by `(x - c_x)/r`, so it takes both signs.
pub fn signed_bump(spectrum: &Arc<Spectrum>, center: (f64, f64), radius: f64, amp: f64) -> Result<SpectralField> {
    if !(radius > 0.0) {
        return Err(out_of_range("radius", radius, "radius > 0"));
    }
    let f = PhysicalField::from_fn(Arc::clone(spectrum), |x, y| {
        let r2 = ((x - center.0).powi(2) + (y - center.1).powi(2)) / (radius * radius);
        amp * (x - center.0) / radius * bump_profile(r2)
    })?;
    Ok(f.to_spectral())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_fields_reproduce() {
        let sp = Spectrum::unit_square(16).unwrap();
        let a = random_band_limited(&sp, 7, (5, 5), 1.0).unwrap();
        let b = random_band_limited(&sp, 7, (5, 5), 1.0).unwrap();
        let c = random_band_limited(&sp, 8, (5, 5), 1.0).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert_ne!(a.coeffs(), c.coeffs());
        assert_eq!(a.coeff(6, 1), 0.0);
        assert!(random_band_limited(&sp, 1, (17, 2), 1.0).is_err());
    }

    #[test]
    fn seeded_fields_do_not_depend_on_resolution() {
        let coarse = Spectrum::unit_square(8).unwrap();
        let fine = Spectrum::unit_square(31).unwrap();
        let a = random_band_limited(&coarse, 11, (6, 4), 1.5).unwrap();
        let b = random_band_limited(&fine, 11, (6, 4), 1.5).unwrap();
        assert_eq!(a.resample(&fine).unwrap().coeffs(), b.coeffs());
    }

    #[test]
    fn bumps_have_expected_sign() {
        let sp = Spectrum::unit_square(48).unwrap();
        let b = bump(&sp, (0.5, 0.5), 0.3, 1.0).unwrap();
        assert!((b.eval_at(0.5, 0.5) - 1.0).abs() < 1e-3);
        assert!(b.integral() > 0.0);
        let sb = signed_bump(&sp, (0.5, 0.5), 0.3, 1.0).unwrap();
        assert!(sb.eval_at(0.6, 0.5) > 0.0 && sb.eval_at(0.4, 0.5) < 0.0);
        assert!(bump(&sp, (0.5, 0.5), 0.0, 1.0).is_err());
    }

    #[test]
    fn cubic_edge_field_matches_formula() {
        let sp = Spectrum::new(crate::RectDomain::new(1.5, 0.7).unwrap(), 6, 6).unwrap();
        let f = cubic_edge_field(&sp).unwrap();
        let (lx, ly) = (1.5, 0.7);
        for &(x, y) in &[(0.3, 0.2), (1.1, 0.5), (0.75, 0.35)] {
            let (u, v) = (std::f64::consts::PI * x / lx, std::f64::consts::PI * y / ly);
            let expect = u.sin().powi(3) * v.sin().powi(3) * (1.0 + 0.4 * u.cos() - 0.3 * v.cos());
            assert!((f.eval_at(x, y) - expect).abs() < 1e-13);
        }
    }
}
