//! Composite Gauss-Legendre quadrature with panel doubling.

use std::sync::OnceLock;

use crate::error::{Result, SpectralError};

const GL_ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 15;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Fixed composite rule with `panels` equal panels of 16-point Gauss-Legendre.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let (nodes, weights) = gl16();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

/// Doubles the panel count until two successive estimates agree to `rel_tol`
/// (or to an absolute floor of `1e-300`).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = 2;
    let mut prev = composite(f, a, b, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let cur = composite(f, a, b, panels);
        if !cur.is_finite() {
            return Err(SpectralError::Quadrature(format!("non-finite estimate on [{a}, {b}]")));
        }
        let diff = (cur - prev).abs();
        if diff <= rel_tol * cur.abs() || diff <= 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(SpectralError::Quadrature(format!(
        "no convergence to {rel_tol:e} on [{a}, {b}] with {MAX_PANELS} panels"
    )))
}

/// `int_{t0}^{t1} g(t) dt` computed as `int g(e^u) e^u du` with [`adaptive`].
pub fn log_time<F: Fn(f64) -> f64>(g: &F, t0: f64, t1: f64, rel_tol: f64) -> Result<f64> {
    if t1 <= t0 {
        return Ok(0.0);
    }
    let h = |u: f64| {
        let t = u.exp();
        g(t) * t
    };
    adaptive(&h, t0.ln(), t1.ln(), rel_tol)
}
