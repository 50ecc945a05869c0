//! `int_Omega Lambda^s f dx >= 0` for nonnegative `f`.

use fracsqg_core::fracops::apply_fractional;
use fracsqg_core::PhysicalField;

use crate::error::{out_of_range, IneqError, Result};
use crate::report::{MarginKind, MarginReport};

/// Tolerance on the integral, relative to `int |f|`.
pub const NONNEG_TOL: f64 = 1e-8;

/// Projects `f` onto the sine modes and integrates `Lambda^s f` with the
/// exact mode integrals.
pub fn integral_nonnegativity(f: &PhysicalField, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 2.0) {
        return Err(out_of_range("s", s, "s in (0,2)"));
    }
    let min = f.min();
    if min < 0.0 {
        return Err(IneqError::NegativeInput(min));
    }
    Ok(apply_fractional(s, &f.to_spectral()).integral())
}

pub fn nonnegativity_report(f: &PhysicalField, s: f64, seed: Option<u64>) -> Result<MarginReport> {
    let v = integral_nonnegativity(f, s)?;
    Ok(MarginReport::new(
        "nonnegativity",
        &[("s", s)],
        v,
        &[("zero", 0.0)],
        MarginKind::Difference,
        v,
        NONNEG_TOL * f.integral().max(f64::MIN_POSITIVE),
        f.spectrum().shape(),
        seed,
    ))
}
