//! Refinement test for `|q|^beta` in the domain of `Lambda^s`.

use fracsqg_core::Spectrum;

use crate::error::{out_of_range, Result};
use crate::testfield::TestField;

/// Allowed drift of the last refinement ratio from 1 for in-case parameters.
pub const GROWTH_TOL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerCase {
    /// Lipschitz `q`, `0 < beta < 1`, `0 < s < beta`.
    Holder,
    /// `beta = 1`, `s = 1`.
    Modulus,
    /// Bounded `q`, `1 < beta < 2`, `s = 1`.
    Subquadratic,
    /// `beta >= 2`, `s = 2`.
    Quadratic,
    OutOfCase,
}

impl PowerCase {
    pub fn classify(beta: f64, s: f64) -> Self {
        if beta > 0.0 && beta < 1.0 && s > 0.0 && s < beta {
            PowerCase::Holder
        } else if beta == 1.0 && s == 1.0 {
            PowerCase::Modulus
        } else if beta > 1.0 && beta < 2.0 && s == 1.0 {
            PowerCase::Subquadratic
        } else if beta >= 2.0 && s == 2.0 {
            PowerCase::Quadratic
        } else {
            PowerCase::OutOfCase
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub beta: f64,
    pub s: f64,
    pub case: PowerCase,
    pub resolutions: Vec<(usize, usize)>,
    /// `||Lambda^s |q|^beta||_{L^2}` at each resolution.
    pub norms: Vec<f64>,
    /// `norms[last] / norms[last - 1]`.
    pub growth: f64,
    /// `None` for out-of-case parameters, which are reported only.
    pub verdict: Option<bool>,
}

/// Evaluates `||Lambda^s |q|^beta||` with `|q|^beta` sampled at the nodes of
/// the grids with `n`, `2n + 1` and `4n + 3` modes per axis, which nest.
pub fn power_domain_check(q: &TestField, beta: f64, s: f64) -> Result<RefinementReport> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(out_of_range("beta", beta, "beta > 0"));
    }
    if !(s > 0.0 && s <= 2.0) {
        return Err(out_of_range("s", s, "s in (0,2]"));
    }
    let base = q.spectrum();
    let dom = *base.domain();
    let (nx, ny) = base.shape();
    let mut resolutions = Vec::new();
    let mut norms = Vec::new();
    for level in 0..3 {
        let m = 1usize << level;
        let sp = Spectrum::new(dom, m * (nx + 1) - 1, m * (ny + 1) - 1)?;
        let f = q.on(&sp)?;
        let pw = f.field().to_physical().map(|v| v.abs().powf(beta)).to_spectral();
        resolutions.push(sp.shape());
        norms.push(pw.sobolev_norm(s));
    }
    let growth = norms[2] / norms[1];
    let case = PowerCase::classify(beta, s);
    let verdict = match case {
        PowerCase::OutOfCase => None,
        _ => Some(growth.is_finite() && (growth - 1.0).abs() <= GROWTH_TOL),
    };
    Ok(RefinementReport {
        beta,
        s,
        case,
        resolutions,
        norms,
        growth,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfield::Generator;

    #[test]
    fn classification() {
        assert_eq!(PowerCase::classify(0.6, 0.3), PowerCase::Holder);
        assert_eq!(PowerCase::classify(1.0, 1.0), PowerCase::Modulus);
        assert_eq!(PowerCase::classify(1.5, 1.0), PowerCase::Subquadratic);
        assert_eq!(PowerCase::classify(3.0, 2.0), PowerCase::Quadratic);
        assert_eq!(PowerCase::classify(0.6, 0.7), PowerCase::OutOfCase);
    }

    #[test]
    fn modulus_gradient_does_not_exceed_field_gradient() {
        let sp = Spectrum::unit_square(15).unwrap();
        let q = TestField::realize(&sp, Generator::RandomBandLimited { decay: 1.0 }, 2, (6, 6)).unwrap();
        let r = power_domain_check(&q, 1.0, 1.0).unwrap();
        let grad = q.field().sobolev_norm(1.0);
        for n in &r.norms {
            assert!(*n <= grad * 1.02, "{n} vs {grad}");
        }
        assert_eq!(r.verdict, Some(true));
        assert!(power_domain_check(&q, 0.0, 1.0).is_err());
    }
}
