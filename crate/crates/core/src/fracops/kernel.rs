//! Jump kernel `K_s` and killing term `B_s` of `||Lambda^s psi||^2`, built from
//! the exact heat kernel of the rectangle.
//!
//! For `s` in `(0, 1)`
//!
//! ```text
//! ||Lambda^s psi||^2 = int int (psi(x) - psi(y))^2 K_s(x, y) dx dy + int psi^2 B_s dx
//! K_s(x, y) = (c_{2s} / 2) int_0^inf H(x, y, t) t^{-1-s} dt
//! B_s(x)    =  c_{2s}      int_0^inf (1 - (e^{t Delta} 1)(x)) t^{-1-s} dt
//! ```
//!
//! The heat kernel factorizes over the two axes. Each 1-D factor uses the
//! method of images for short times and the sine series otherwise, so `K_s`
//! carries the correct `|x - y|^{-2-2s}` singularity instead of the
//! oscillating tail of a truncated eigen-series.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::domain::RectDomain;
use crate::error::{out_of_range, Result, SpectralError};
use crate::field::SpectralField;
use crate::fracops::{apply_fractional, fractional_constant};
use crate::quadrature::{adaptive, log_time};

/// Images `m = -IMAGES..=IMAGES` suffice below `t = L^2 / 8` (next term ~ e^-72).
const IMAGES: i32 = 3;
/// `exp(-TAIL)` is treated as zero.
const TAIL: f64 = 60.0;
/// Half-width, in lattice cells, of the box used for the diagonal correction.
const DIAG_BOX: i64 = 400;

fn gauss(z: f64, t: f64) -> f64 {
    (-z * z / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Dirichlet heat kernel on `[0, l]`.
pub fn heat_kernel_1d(x: f64, y: f64, t: f64, l: f64) -> f64 {
    if t < l * l / 8.0 {
        (-IMAGES..=IMAGES)
            .map(|m| {
                let shift = 2.0 * m as f64 * l;
                gauss(x - y - shift, t) - gauss(x + y - shift, t)
            })
            .sum()
    } else {
        let jmax = ((TAIL / t).sqrt() * l / PI).ceil() as usize + 1;
        (1..=jmax)
            .map(|j| {
                let k = j as f64 * PI / l;
                (-t * k * k).exp() * (k * x).sin() * (k * y).sin()
            })
            .sum::<f64>()
            * (2.0 / l)
    }
}

/// `1 - (e^{t Delta} 1)(x)` on `[0, l]`.
pub fn complement_1d(x: f64, t: f64, l: f64) -> f64 {
    if t < l * l / 8.0 {
        let sigma = 2.0 * t.sqrt();
        (-IMAGES..=IMAGES)
            .map(|m| {
                let a = (2 * m - 1) as f64 * l;
                let b = 2.0 * m as f64 * l;
                if m >= 1 {
                    libm::erfc((a - x) / sigma) - libm::erfc((b - x) / sigma)
                } else {
                    libm::erfc((x - b) / sigma) - libm::erfc((x - a) / sigma)
                }
            })
            .sum()
    } else {
        let jmax = ((TAIL / t).sqrt() * l / PI).ceil() as usize + 2;
        let u: f64 = (1..=jmax)
            .step_by(2)
            .map(|j| {
                let k = j as f64 * PI / l;
                (-t * k * k).exp() * (k * x).sin() / j as f64
            })
            .sum();
        1.0 - 4.0 / PI * u
    }
}

/// Heat kernel of the rectangle.
pub fn heat_kernel_rect(domain: &RectDomain, x: (f64, f64), y: (f64, f64), t: f64) -> f64 {
    heat_kernel_1d(x.0, y.0, t, domain.lx()) * heat_kernel_1d(x.1, y.1, t, domain.ly())
}

fn lambda_11(domain: &RectDomain) -> f64 {
    PI * PI * (1.0 / (domain.lx() * domain.lx()) + 1.0 / (domain.ly() * domain.ly()))
}

/// An ordered pair of distinct interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePair {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

/// Sampled `K_s` and `B_s`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    s: f64,
    rel_tol: f64,
    pairs: Vec<SamplePair>,
    k_values: Vec<f64>,
    points: Vec<(f64, f64)>,
    b_values: Vec<f64>,
    whole_space: f64,
}

impl KernelTable {
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Relative tolerance of the time quadrature.
    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn pairs(&self) -> &[SamplePair] {
        &self.pairs
    }

    pub fn k_values(&self) -> &[f64] {
        &self.k_values
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn b_values(&self) -> &[f64] {
        &self.b_values
    }

    /// `max K_s(x, y) |x - y|^{2+2s}` over the sampled pairs.
    pub fn empirical_constant(&self) -> f64 {
        self.pairs
            .iter()
            .zip(&self.k_values)
            .map(|(p, k)| k * dist(p.x, p.y).powf(2.0 + 2.0 * self.s))
            .fold(0.0, f64::max)
    }

    /// Constant of the whole-plane kernel `kappa / |z|^{2+2s}`.
    pub fn whole_space_constant(&self) -> f64 {
        self.whole_space
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(out_of_range("s", s, "s in (0,1)"))
    }
}

fn check_interior(domain: &RectDomain, p: (f64, f64)) -> Result<()> {
    if domain.contains(p.0, p.1) && domain.boundary_distance(p.0, p.1) > 0.0 {
        Ok(())
    } else {
        Err(out_of_range("sample point", p.0, "strictly inside the domain"))
    }
}

/// `(c_{2s}/2) int H t^{-1-s} dt`; below `r^2/240` the kernel is under `e^-60`
/// of its peak and past `60/lambda_11` it has decayed by `e^-60`.
fn kernel_value(domain: &RectDomain, s: f64, c2s: f64, x: (f64, f64), y: (f64, f64), rel_tol: f64) -> Result<f64> {
    let r = dist(x, y);
    let t_hi = TAIL / lambda_11(domain);
    let t_lo = (r * r / 240.0).min(0.5 * t_hi);
    let t_peak = (r * r / 8.0).clamp(t_lo, t_hi);
    let g = |t: f64| heat_kernel_rect(domain, x, y, t) * t.powf(-1.0 - s);
    let v = log_time(&g, t_lo, t_peak, rel_tol)? + log_time(&g, t_peak, t_hi, rel_tol)?;
    Ok((0.5 * c2s * v).max(0.0))
}

fn killing_value(domain: &RectDomain, s: f64, c2s: f64, x: (f64, f64), rel_tol: f64) -> f64 {
    let d = domain.boundary_distance(x.0, x.1);
    let t_hi = TAIL / lambda_11(domain);
    let t_lo = (d * d / 240.0).min(0.5 * t_hi);
    let t_peak = (d * d / 4.0).clamp(t_lo, t_hi);
    let g = |t: f64| {
        let a = complement_1d(x.0, t, domain.lx());
        let b = complement_1d(x.1, t, domain.ly());
        (a + b - a * b) * t.powf(-1.0 - s)
    };
    let v = log_time(&g, t_lo, t_peak, rel_tol).unwrap_or(f64::NAN)
        + log_time(&g, t_peak, t_hi, rel_tol).unwrap_or(f64::NAN);
    c2s * (v + t_hi.powf(-s) / s)
}

/// Samples `K_s` at `pairs` and `B_s` at `points` with time quadrature to
/// relative tolerance `rel_tol`.
pub fn kernel_assemble(
    domain: &RectDomain,
    s: f64,
    pairs: &[SamplePair],
    points: &[(f64, f64)],
    rel_tol: f64,
) -> Result<KernelTable> {
    check_s(s)?;
    for p in pairs {
        check_interior(domain, p.x)?;
        check_interior(domain, p.y)?;
        if p.x == p.y {
            return Err(SpectralError::CoincidentPair { x: p.x.0, y: p.x.1 });
        }
    }
    for &p in points {
        check_interior(domain, p)?;
    }
    let c2s = fractional_constant(2.0 * s)?;
    let k_values = pairs
        .par_iter()
        .map(|p| kernel_value(domain, s, c2s, p.x, p.y, rel_tol))
        .collect::<Result<Vec<f64>>>()?;
    let b_values: Vec<f64> = points
        .par_iter()
        .map(|&p| killing_value(domain, s, c2s, p, rel_tol))
        .collect();
    if b_values.iter().any(|b| !b.is_finite()) {
        return Err(SpectralError::Quadrature("killing term did not converge".into()));
    }
    Ok(KernelTable {
        s,
        rel_tol,
        pairs: pairs.to_vec(),
        k_values,
        points: points.to_vec(),
        b_values,
        whole_space: c2s * 4f64.powf(s) * libm::tgamma(1.0 + s) / (2.0 * PI),
    })
}

/// Outcome of comparing `||Lambda^s psi||^2` with its kernel representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationReport {
    pub s: f64,
    /// Interior lattice points per axis.
    pub lattice: usize,
    /// `||Lambda^s psi||^2` from the coefficients.
    pub spectral: f64,
    /// Off-diagonal lattice sum of the double integral.
    pub pair_sum: f64,
    /// Contribution of the singular diagonal missed by the lattice sum.
    pub diagonal_correction: f64,
    /// `int psi^2 B_s`.
    pub killing_term: f64,
    pub total: f64,
    pub rel_error: f64,
    /// `max K_s |x-y|^{2+2s}` over the lattice pairs.
    pub empirical_constant: f64,
}

/// `int_box z1^2 |z|^{-2-2s} dz - hx hy sum_{lattice != 0} z1^2 |z|^{-2-2s}`
/// over the box of `2 DIAG_BOX + 1` cells per side centred on the origin.
fn diagonal_defect(hx: f64, hy: f64, s: f64) -> Result<f64> {
    let m = DIAG_BOX as f64 + 0.5;
    let (a, b) = (m * hx, m * hy);
    let theta_c = (b / a).atan();
    let p = 2.0 - 2.0 * s;
    let f1 = |th: f64| th.cos().powi(2) * (a / th.cos()).powf(p) / p;
    let f2 = |th: f64| th.cos().powi(2) * (b / th.sin()).powf(p) / p;
    let box_integral = 4.0 * (adaptive(&f1, 0.0, theta_c, 1e-13)? + adaptive(&f2, theta_c, 0.5 * PI, 1e-13)?);
    let lattice: f64 = (-DIAG_BOX..=DIAG_BOX)
        .into_par_iter()
        .map(|i| {
            let z1 = i as f64 * hx;
            let mut acc = 0.0;
            for j in -DIAG_BOX..=DIAG_BOX {
                if i == 0 && j == 0 {
                    continue;
                }
                let z2 = j as f64 * hy;
                let r2 = z1 * z1 + z2 * z2;
                acc += z1 * z1 * r2.powf(-1.0 - s);
            }
            acc
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(box_integral - hx * hy * lattice)
}

/// Evaluates the kernel representation of `||Lambda^s psi||^2` on the
/// `m x m` interior lattice of the domain and compares it with the spectral
/// value. The singular diagonal of the double integral is handled by adding,
/// at every lattice point, the exact defect of the lattice sum for the
/// whole-plane kernel applied to the local linearization of `psi`.
pub fn representation_check(psi: &SpectralField, s: f64, m: usize) -> Result<RepresentationReport> {
    check_s(s)?;
    if m < 2 {
        return Err(out_of_range("lattice", m as f64, "m >= 2"));
    }
    let domain = *psi.spectrum().domain();
    let hx = domain.lx() / (m + 1) as f64;
    let hy = domain.ly() / (m + 1) as f64;
    let nodes: Vec<(f64, f64)> = (1..=m)
        .flat_map(|i| (1..=m).map(move |l| (i as f64 * hx, l as f64 * hy)))
        .collect();
    let values: Vec<f64> = nodes.iter().map(|p| psi.eval_at(p.0, p.1)).collect();
    let mut pairs = Vec::with_capacity(nodes.len() * (nodes.len() - 1) / 2);
    let mut index = Vec::with_capacity(pairs.capacity());
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            pairs.push(SamplePair { x: nodes[a], y: nodes[b] });
            index.push((a, b));
        }
    }
    let table = kernel_assemble(&domain, s, &pairs, &nodes, 1e-10)?;
    let w = hx * hy;
    let pair_sum: f64 = 2.0
        * w
        * w
        * index
            .iter()
            .zip(table.k_values())
            .map(|(&(a, b), k)| (values[a] - values[b]).powi(2) * k)
            .sum::<f64>();
    let killing_term: f64 = w * values.iter().zip(table.b_values()).map(|(v, b)| v * v * b).sum::<f64>();
    let kappa = table.whole_space_constant();
    let zeta_x = diagonal_defect(hx, hy, s)?;
    let zeta_y = diagonal_defect(hy, hx, s)?;
    let diagonal_correction: f64 = nodes
        .iter()
        .map(|p| {
            let (gx, gy) = psi.gradient_at(p.0, p.1);
            w * kappa * (gx * gx * zeta_x + gy * gy * zeta_y)
        })
        .sum();
    let spectral = apply_fractional(s, psi).l2_norm().powi(2);
    let total = pair_sum + diagonal_correction + killing_term;
    Ok(RepresentationReport {
        s,
        lattice: m,
        spectral,
        pair_sum,
        diagonal_correction,
        killing_term,
        total,
        rel_error: (total - spectral).abs() / spectral,
        empirical_constant: table.empirical_constant(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Spectrum;
    use std::sync::Arc;

    fn series_1d(x: f64, y: f64, t: f64, l: f64) -> f64 {
        (1..4000)
            .map(|j| {
                let k = j as f64 * PI / l;
                (-t * k * k).exp() * (k * x).sin() * (k * y).sin()
            })
            .sum::<f64>()
            * (2.0 / l)
    }

    #[test]
    fn image_and_series_forms_agree() {
        for &(x, y) in &[(0.3, 0.35), (0.05, 0.9), (1.1, 1.2)] {
            for &t in &[1e-3, 0.02, 0.1, 0.3] {
                let l = 1.3;
                let img = heat_kernel_1d(x, y, t, l);
                let ser = series_1d(x, y, t, l);
                assert!((img - ser).abs() < 1e-12 * ser.abs().max(1.0), "x={x} y={y} t={t}");
            }
        }
    }

    #[test]
    fn complement_forms_agree() {
        let l = 0.8;
        for &x in &[0.01, 0.2, 0.4, 0.77] {
            for &t in &[1e-4, 0.01, 0.05, 0.079, 0.081, 0.5] {
                let v = complement_1d(x, t, l);
                let series: f64 = 1.0
                    - 4.0 / PI
                        * (1..200_001)
                            .step_by(2)
                            .map(|j| {
                                let k = j as f64 * PI / l;
                                (-t * k * k).exp() * (k * x).sin() / j as f64
                            })
                            .sum::<f64>();
                assert!((v - series).abs() < 1e-9, "x={x} t={t}: {v} vs {series}");
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn kernels_nonnegative_and_below_whole_space() {
        let d = RectDomain::unit_square();
        let pts: Vec<(f64, f64)> = (1..6).flat_map(|i| (1..6).map(move |j| (i as f64 / 6.0, j as f64 / 6.0))).collect();
        let mut pairs = Vec::new();
        for (a, &p) in pts.iter().enumerate() {
            for &q in &pts[a + 1..] {
                pairs.push(SamplePair { x: p, y: q });
            }
        }
        for s in [0.25, 0.75] {
            let t = kernel_assemble(&d, s, &pairs, &pts, 1e-10).unwrap();
            assert!(t.k_values().iter().all(|&k| k >= 0.0));
            assert!(t.b_values().iter().all(|&b| b >= 0.0));
            let c = t.empirical_constant();
            assert!(c.is_finite() && c <= t.whole_space_constant() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn coincident_pair_rejected() {
        let d = RectDomain::unit_square();
        let p = SamplePair { x: (0.5, 0.5), y: (0.5, 0.5) };
        assert!(matches!(
            kernel_assemble(&d, 0.5, &[p], &[], 1e-8),
            Err(SpectralError::CoincidentPair { .. })
        ));
        assert!(kernel_assemble(&d, 1.0, &[], &[], 1e-8).is_err());
    }

    #[test]
    fn representation_of_low_mode_field() {
        let sp = Spectrum::unit_square(4).unwrap();
        let psi = crate::generators::cubic_edge_field(&sp).unwrap();
        for s in [0.25, 0.75] {
            let r = representation_check(&psi, s, 9).unwrap();
            assert!(r.rel_error < 0.01, "{r:?}");
        }
    }

    #[test]
    fn representation_converges_for_linear_edge_field() {
        let sp = Spectrum::unit_square(2).unwrap();
        let psi = SpectralField::from_mode_fn(Arc::clone(&sp), |j, k, _| if (j, k) == (1, 1) { 1.0 } else { 0.3 })
            .unwrap();
        let coarse = representation_check(&psi, 0.5, 5).unwrap();
        let fine = representation_check(&psi, 0.5, 11).unwrap();
        assert!(fine.rel_error < 0.6 * coarse.rel_error, "{coarse:?} {fine:?}");
    }
}
