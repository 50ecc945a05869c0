//! Pointwise defect `Phi'(q) Lambda^s q - Lambda^s Phi(q)`.

use fracsqg_core::fracops::apply_fractional;
use fracsqg_core::{PhysicalField, SpectralField};

use crate::error::{out_of_range, IneqError, Result};
use crate::report::{MarginKind, MarginReport};

/// Relative tolerance on the defect minimum, in units of `max |Phi(q)|`.
pub const CORDOBA_TOL: f64 = 1e-6;

/// Convex `C^1` functions with `Phi(0) = 0` accepted by the defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phi {
    Square,
    AbsPower(f64),
    PositivePartSquare,
}

impl Phi {
    pub fn abs_power(p: f64) -> Result<Self> {
        if p >= 2.0 && p.is_finite() {
            Ok(Phi::AbsPower(p))
        } else {
            Err(IneqError::UnsupportedPhi(format!("|x|^{p} needs p >= 2")))
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Phi::AbsPower(p) => Phi::abs_power(p).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Phi::Square => x * x,
            Phi::AbsPower(p) => x.abs().powf(p),
            Phi::PositivePartSquare => x.max(0.0).powi(2),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Phi::Square => 2.0 * x,
            Phi::AbsPower(p) => p * x.abs().powf(p - 1.0) * x.signum(),
            Phi::PositivePartSquare => 2.0 * x.max(0.0),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Phi::Square => "x^2".into(),
            Phi::AbsPower(p) => format!("|x|^{p}"),
            Phi::PositivePartSquare => "max(x,0)^2".into(),
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s <= 2.0 {
        Ok(())
    } else {
        Err(out_of_range("s", s, "s in (0,2]"))
    }
}

/// `D = Phi'(q) Lambda^s q - Lambda^s(Phi(q))` on the grid, with `Phi(q)`
/// sampled at the nodes and projected onto the sine modes.
pub fn cordoba_defect(q: &SpectralField, s: f64, phi: Phi) -> Result<PhysicalField> {
    check_s(s)?;
    phi.validate()?;
    let qp = q.to_physical();
    let lq = apply_fractional(s, q).to_physical();
    let phi_q = qp.map(|v| phi.value(v)).to_spectral();
    let l_phi = apply_fractional(s, &phi_q).to_physical();
    let lead = qp.zip_with(&lq, |v, l| phi.derivative(v) * l)?;
    Ok(lead.zip_with(&l_phi, |a, b| a - b)?)
}

fn interior_min(f: &PhysicalField) -> f64 {
    let v = f.values();
    let (gx, gy) = v.dim();
    let mut m = f64::INFINITY;
    for i in 1..gx - 1 {
        for l in 1..gy - 1 {
            m = m.min(v[[i, l]]);
        }
    }
    m
}

/// Minimum of the defect over interior nodes against `-CORDOBA_TOL max |Phi(q)|`.
/// `empirical_constant` is the largest `c` with `D >= c (q Phi'(q) - Phi(q)) / d^s`
/// over the nodes where the right side is positive.
pub fn cordoba_report(q: &SpectralField, s: f64, phi: Phi, seed: Option<u64>) -> Result<MarginReport> {
    let d = cordoba_defect(q, s, phi)?;
    let qp = q.to_physical();
    let scale = qp.map(|v| phi.value(v)).max_abs();
    let min = interior_min(&d);
    let sp = q.spectrum();
    let dom = sp.domain();
    let mut c = f64::INFINITY;
    let (dv, qv) = (d.values(), qp.values());
    let (gx, gy) = dv.dim();
    for i in 1..gx - 1 {
        for l in 1..gy - 1 {
            let v = qv[[i, l]];
            let w = v * phi.derivative(v) - phi.value(v);
            if w > 1e-12 * scale {
                let dist = dom.boundary_distance(sp.node_x(i), sp.node_y(l));
                c = c.min(dv[[i, l]] * dist.powf(s) / w);
            }
        }
    }
    let mut r = MarginReport::new(
        "cordoba",
        &[("s", s)],
        min,
        &[("zero", 0.0)],
        MarginKind::Difference,
        min,
        CORDOBA_TOL * scale,
        sp.shape(),
        seed,
    );
    r.id = format!("cordoba[{}]", phi.name());
    if c.is_finite() {
        r = r.with_constant(c);
    }
    Ok(r)
}

/// Largest deviation of the `s = 2`, `Phi = x^2` defect from `2 |grad q|^2`,
/// relative to `max 2 |grad q|^2`, over interior nodes at distance at least
/// `inset` from the boundary.
pub fn leibniz_residual(q: &SpectralField, inset: f64) -> Result<f64> {
    let d = cordoba_defect(q, 2.0, Phi::Square)?;
    let g = q.gradient();
    let (gx_, gy_) = (g.x(), g.y());
    let dv = d.values();
    let (gx, gy) = dv.dim();
    let sp = q.spectrum();
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 1..gx - 1 {
        for l in 1..gy - 1 {
            if sp.domain().boundary_distance(sp.node_x(i), sp.node_y(l)) < inset {
                continue;
            }
            let expect = 2.0 * (gx_[[i, l]].powi(2) + gy_[[i, l]].powi(2));
            err = err.max((dv[[i, l]] - expect).abs());
            scale = scale.max(expect.abs());
        }
    }
    Ok(if scale > 0.0 { err / scale } else { err })
}
