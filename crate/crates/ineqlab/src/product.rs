//! Ratios for the fractional product estimates, with unit constants.

use fracsqg_core::{PhysicalField, SpectralField};
use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{out_of_range, Result};
use crate::report::{MarginKind, MarginReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductVariant {
    /// Fractional Sobolev norms `W^{1/k + beta, 2k/(k-1)}` against `L^{2k}`,
    /// with `k_1 = k_2 = k > 1/(1 - beta)`.
    SobolevLebesgue { k: f64 },
    /// `||g||_inf ||Lambda^beta h|| + ||h||_inf ||g||_{H^beta}`.
    Bounded,
    /// `||g||_inf ||Lambda^beta h|| + ||h||_2 [g]_{C^{0,gamma}}`, `gamma > beta`.
    Holder { gamma: f64 },
}

struct Nodes {
    x: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    v: Vec<f64>,
}

fn nodes(f: &PhysicalField) -> Nodes {
    let sp = f.spectrum();
    let (tx, ty) = (sp.trapezoid_x(), sp.trapezoid_y());
    let vals = f.values();
    let (gx, gy) = vals.dim();
    let mut n = Nodes {
        x: Vec::with_capacity(gx * gy),
        y: Vec::with_capacity(gx * gy),
        w: Vec::with_capacity(gx * gy),
        v: Vec::with_capacity(gx * gy),
    };
    for i in 0..gx {
        for l in 0..gy {
            n.x.push(sp.node_x(i));
            n.y.push(sp.node_y(l));
            n.w.push(tx[i] * ty[l]);
            n.v.push(vals[[i, l]]);
        }
    }
    n
}

/// `(||f||_r^r + int int |f(x) - f(y)|^r / |x - y|^{2 + sigma r})^{1/r}` by the
/// trapezoid rule in both variables, skipping the diagonal.
pub fn gagliardo_norm(f: &PhysicalField, sigma: f64, r: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(out_of_range("sigma", sigma, "sigma in (0,1)"));
    }
    if !(r >= 1.0 && r.is_finite()) {
        return Err(out_of_range("r", r, "1 <= r < inf"));
    }
    let n = nodes(f);
    let e = -0.5 * (2.0 + sigma * r);
    let semi: f64 = (0..n.v.len())
        .into_par_iter()
        .map(|a| {
            let mut acc = 0.0;
            for b in 0..n.v.len() {
                if a == b {
                    continue;
                }
                let dv = (n.v[a] - n.v[b]).abs();
                if dv == 0.0 {
                    continue;
                }
                let d2 = (n.x[a] - n.x[b]).powi(2) + (n.y[a] - n.y[b]).powi(2);
                acc += n.w[b] * dv.powf(r) * d2.powf(e);
            }
            n.w[a] * acc
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok((f.lp_norm(r)?.powf(r) + semi).powf(1.0 / r))
}

/// `max |f(x) - f(y)| / |x - y|^gamma` over node pairs at least two cells apart.
pub fn holder_seminorm(f: &PhysicalField, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(out_of_range("gamma", gamma, "gamma in (0,1]"));
    }
    let sp = f.spectrum();
    let cut = 2.0 * sp.hx().max(sp.hy());
    let n = nodes(f);
    let m = (0..n.v.len())
        .into_par_iter()
        .map(|a| {
            let mut m: f64 = 0.0;
            for b in a + 1..n.v.len() {
                let d = ((n.x[a] - n.x[b]).powi(2) + (n.y[a] - n.y[b]).powi(2)).sqrt();
                if d >= cut * (1.0 - 1e-12) {
                    m = m.max((n.v[a] - n.v[b]).abs() / d.powf(gamma));
                }
            }
            m
        })
        .reduce(|| 0.0, f64::max);
    Ok(m)
}

fn product(g: &SpectralField, h: &SpectralField) -> Result<SpectralField> {
    let gh: Array2<f64> = &g.to_physical().values() * &h.to_physical().values();
    Ok(PhysicalField::new(g.spectrum().clone(), gh)?.to_spectral())
}

/// `||Lambda^beta (gh)|| / RHS` with `C = 1`; `gh` is formed on the grid and projected.
pub fn product_ratio(
    g: &SpectralField,
    h: &SpectralField,
    beta: f64,
    variant: ProductVariant,
    seed: Option<u64>,
) -> Result<MarginReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(out_of_range("beta", beta, "beta in (0,1)"));
    }
    let lhs = product(g, h)?.sobolev_norm(beta);
    let (gp, hp) = (g.to_physical(), h.to_physical());
    let (id, params, rhs): (&str, Vec<(&str, f64)>, Vec<(&str, f64)>) = match variant {
        ProductVariant::SobolevLebesgue { k } => {
            if (beta - 0.5).abs() < 1e-12 {
                return Err(out_of_range("beta", beta, "beta != 1/2"));
            }
            if !(k > 1.0 / (1.0 - beta) && k.is_finite()) {
                return Err(out_of_range("k", k, "1/(1 - beta) < k < inf"));
            }
            let (sigma, r) = (1.0 / k + beta, 2.0 * k / (k - 1.0));
            let a = gagliardo_norm(&gp, sigma, r)? * hp.lp_norm(2.0 * k)?;
            let b = gp.lp_norm(2.0 * k)? * gagliardo_norm(&hp, sigma, r)?;
            ("product_v1", vec![("beta", beta), ("k1", k), ("k2", k)], vec![("g_term", a), ("h_term", b)])
        }
        ProductVariant::Bounded => {
            let a = gp.max_abs() * h.sobolev_norm(beta);
            let b = hp.max_abs() * gagliardo_norm(&gp, beta, 2.0)?;
            ("product_v2", vec![("beta", beta)], vec![("g_term", a), ("h_term", b)])
        }
        ProductVariant::Holder { gamma } => {
            if !(gamma > beta && gamma <= 1.0) {
                return Err(out_of_range("gamma", gamma, "beta < gamma <= 1"));
            }
            let a = gp.max_abs() * h.sobolev_norm(beta);
            let b = h.l2_norm() * holder_seminorm(&gp, gamma)?;
            ("product_v3", vec![("beta", beta), ("gamma", gamma)], vec![("g_term", a), ("h_term", b)])
        }
    };
    let total: f64 = rhs.iter().map(|(_, v)| v).sum();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / total };
    Ok(MarginReport::new(id, &params, lhs, &rhs, MarginKind::Ratio, ratio, 0.0, g.spectrum().shape(), seed))
}
