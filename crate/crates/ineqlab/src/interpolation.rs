//! Spectral interpolation `||Lambda^s f|| <= ||Lambda^{s1} f||^theta ||Lambda^{s2} f||^{1-theta}`.

use fracsqg_core::SpectralField;

use crate::error::{out_of_range, Result};
use crate::report::{MarginKind, MarginReport};

/// Relative tolerance; the bound is Hölder's inequality on the coefficient sums.
pub const INTERPOLATION_TOL: f64 = 1e-13;

pub fn interpolation_check(f: &SpectralField, s1: f64, s: f64, s2: f64, seed: Option<u64>) -> Result<MarginReport> {
    if s2 < s1 || s < s1 || s > s2 {
        return Err(out_of_range("s", s, "s1 <= s <= s2"));
    }
    if s1 == s2 && s != s1 {
        return Err(out_of_range("s2", s2, "s2 > s1"));
    }
    let theta = if s2 > s1 { (s2 - s) / (s2 - s1) } else { 1.0 };
    let lhs = f.sobolev_norm(s);
    let rhs = f.sobolev_norm(s1).powf(theta) * f.sobolev_norm(s2).powf(1.0 - theta);
    Ok(MarginReport::new(
        "interpolation",
        &[("s1", s1), ("s", s), ("s2", s2), ("theta", theta)],
        lhs,
        &[("holder_bound", rhs)],
        MarginKind::Difference,
        rhs - lhs,
        INTERPOLATION_TOL * rhs,
        f.spectrum().shape(),
        seed,
    ))
}
