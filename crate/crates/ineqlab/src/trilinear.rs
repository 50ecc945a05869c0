//! Ratio for the fractional trilinear estimate with unit constant.

use fracsqg_core::fracops::riesz_perp;
use fracsqg_core::{PhysicalField, SpectralField};
use ndarray::Zip;

use crate::error::{out_of_range, Result};
use crate::report::{MarginKind, MarginReport};

/// `||u||_{H^1}` for `u = R^perp q`, from `||u||^2 = sum q^2` and
/// `||grad u||^2 = sum lambda q^2`.
pub fn riesz_h1_norm(q: &SpectralField) -> f64 {
    let ev = q.spectrum().eigenvalues();
    Zip::from(q.coeffs()).and(ev).fold(0.0, |acc, c, l| acc + (1.0 + l) * c * c).sqrt()
}

/// `|(Lambda^{1-a/2}(u.grad v), Lambda^{1+a/2} w)|` divided by
/// `||Lambda^{1+a/2} w|| ||u||_{H^1} ||Lambda^{2-a/2+e0} v||` with `u = R^perp q1`.
/// The transport term is formed on the grid and projected.
pub fn trilinear_ratio(
    q1: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
    alpha: f64,
    eps0: f64,
    seed: Option<u64>,
) -> Result<MarginReport> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(out_of_range("alpha", alpha, "alpha in (1,2)"));
    }
    if !(eps0 > 0.0 && alpha > 1.0 + 2.0 * eps0) {
        return Err(out_of_range("eps0", eps0, "0 < eps0 < (alpha - 1)/2"));
    }
    let u = riesz_perp(q1);
    let g = v.gradient();
    let vals = Zip::from(u.x()).and(u.y()).and(g.x()).and(g.y()).map_collect(|a, b, c, d| a * c + b * d);
    let transport = PhysicalField::new(q1.spectrum().clone(), vals)?.to_spectral();
    let lhs = transport.sobolev_inner(1.0, w)?.abs();
    let nw = w.sobolev_norm(1.0 + 0.5 * alpha);
    let nu = riesz_h1_norm(q1);
    let nv = v.sobolev_norm(2.0 - 0.5 * alpha + eps0);
    let rhs = nw * nu * nv;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(MarginReport::new(
        "trilinear",
        &[("alpha", alpha), ("eps0", eps0)],
        lhs,
        &[("product_of_norms", rhs)],
        MarginKind::Ratio,
        ratio,
        0.0,
        q1.spectrum().shape(),
        seed,
    ))
}
