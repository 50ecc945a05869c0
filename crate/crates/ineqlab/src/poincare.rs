//! Nonlinear Poincaré inequality
//! `int q|q|^{p-2} Lambda^s q >= c1 ||Lambda^{s/2} |q|^{p/2}||^2 + c2 ||q||_p^p`.

use fracsqg_core::fracops::apply_fractional;
use fracsqg_core::SpectralField;

use crate::error::{out_of_range, Result};
use crate::report::{MarginKind, MarginReport};

/// Tolerance for the exact rows, relative to `|LHS| + |RHS|`.
pub const POINCARE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoincareCase {
    /// `p = 2` or `p = 4`, where both constants are explicit.
    Exact,
    /// `c1 = 0`.
    NoGradient,
    /// `c1 = 2 - 4/p`, with `|q|^{p-2}` in the operator domain.
    IntegratedByParts,
    /// `c1 = 4/p`, `p > 4`.
    LargeP,
}

/// Case and `(c1, c2)` from the table. `c2` is `None` where it contains an
/// unspecified domain constant.
pub fn poincare_constants(p: f64, s: f64, lambda_1: f64) -> Result<(PoincareCase, f64, Option<f64>)> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(out_of_range("p", p, "p >= 2"));
    }
    if !(s > 0.0 && s < 2.0) {
        return Err(out_of_range("s", s, "s in (0,2)"));
    }
    Ok(if p == 2.0 || p == 4.0 {
        (PoincareCase::Exact, 1.0 / p, Some(lambda_1.powf(0.5 * s) / p))
    } else if p > 4.0 {
        (PoincareCase::LargeP, 4.0 / p, None)
    } else if s > 1.0 || (p < 3.0 && s >= p - 2.0) {
        (PoincareCase::NoGradient, 0.0, None)
    } else {
        (PoincareCase::IntegratedByParts, 2.0 - 4.0 / p, None)
    })
}

/// The three integrals of the inequality: `LHS`, `||Lambda^{s/2}|q|^{p/2}||^2`
/// and `||q||_p^p`. `|q|^{p/2}` is sampled on the grid and projected.
pub fn poincare_terms(q: &SpectralField, p: f64, s: f64) -> Result<(f64, f64, f64)> {
    let qp = q.to_physical();
    let lq = apply_fractional(s, q).to_physical();
    let lhs = qp.zip_with(&lq, |v, l| v * v.abs().powf(p - 2.0) * l)?.integral();
    let half = qp.map(|v| v.abs().powf(0.5 * p)).to_spectral();
    let grad_term = half.sobolev_norm(0.5 * s).powi(2);
    let lp = qp.lp_norm(p)?.powf(p);
    Ok((lhs, grad_term, lp))
}

pub fn poincare_margin(q: &SpectralField, p: f64, s: f64, seed: Option<u64>) -> Result<MarginReport> {
    let (case, c1, c2) = poincare_constants(p, s, q.spectrum().lambda_min())?;
    let (lhs, grad_term, lp) = poincare_terms(q, p, s)?;
    let shape = q.spectrum().shape();
    let params = [("p", p), ("s", s), ("c1", c1)];
    Ok(match (case, c2) {
        (PoincareCase::Exact, Some(c2)) => {
            let (a, b) = (c1 * grad_term, c2 * lp);
            MarginReport::new(
                "poincare",
                &params,
                lhs,
                &[("c1_term", a), ("c2_term", b)],
                MarginKind::Difference,
                lhs - a - b,
                POINCARE_TOL * (lhs.abs() + a.abs() + b.abs()),
                shape,
                seed,
            )
        }
        _ => {
            let a = c1 * grad_term;
            let c2_star = (lhs - a) / lp;
            // The verdict is c2* > 0, so the tolerance is zero and the margin
            // is the excess over the c1 term.
            let mut r = MarginReport::new(
                "poincare",
                &params,
                lhs,
                &[("c1_term", a), ("lp_norm_p", lp)],
                MarginKind::Difference,
                lhs - a,
                0.0,
                shape,
                seed,
            )
            .with_constant(c2_star);
            r.verdict = c2_star > 0.0;
            r
        }
    })
}
