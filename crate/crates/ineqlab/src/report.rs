//! Margin reports and their CSV form.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginKind {
    /// `margin = LHS - RHS`.
    Difference,
    /// `margin = LHS / RHS` with unit constant.
    Ratio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    pub id: String,
    pub params: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: Vec<(String, f64)>,
    pub kind: MarginKind,
    pub margin: f64,
    pub tol: f64,
    pub verdict: bool,
    /// Measured value of a constant the inequality leaves unspecified.
    pub empirical_constant: Option<f64>,
    pub resolution: (usize, usize),
    pub seed: Option<u64>,
}

impl MarginReport {
    /// Builds a report whose verdict is `margin >= -tol`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: &str,
        params: &[(&str, f64)],
        lhs: f64,
        rhs: &[(&str, f64)],
        kind: MarginKind,
        margin: f64,
        tol: f64,
        resolution: (usize, usize),
        seed: Option<u64>,
    ) -> Self {
        Self {
            id: id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs: rhs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            kind,
            margin,
            tol,
            verdict: margin.is_finite() && margin >= -tol,
            empirical_constant: None,
            resolution,
            seed,
        }
    }

    /// Marks the report as informational: the tolerance becomes infinite, so
    /// any finite margin passes.
    pub fn unasserted(mut self) -> Self {
        self.tol = f64::INFINITY;
        self.verdict = !self.margin.is_nan();
        self
    }

    /// Multiplies a finite tolerance by `factor` and recomputes the verdict.
    pub fn with_tol_scale(mut self, factor: f64) -> Self {
        if self.tol.is_finite() {
            self.tol *= factor;
            self.verdict = self.margin.is_finite() && self.margin >= -self.tol;
        }
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.empirical_constant = Some(c);
        self
    }

    pub fn rhs_total(&self) -> f64 {
        self.rhs.iter().map(|(_, v)| v).sum()
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn csv_header() -> &'static str {
        "id,params,lhs,rhs,kind,margin,tol,verdict,empirical_constant,nx,ny,seed"
    }

    pub fn csv_row(&self) -> String {
        let join = |xs: &[(String, f64)]| {
            let mut out = String::new();
            for (i, (k, v)) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(';');
                }
                let _ = write!(out, "{k}={v:.16e}");
            }
            out
        };
        let kind = match self.kind {
            MarginKind::Difference => "difference",
            MarginKind::Ratio => "ratio",
        };
        let constant = self.empirical_constant.map(|c| format!("{c:.16e}")).unwrap_or_default();
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{:.16e},{},{},{:.16e},{:.16e},{},{},{},{},{}",
            self.id,
            join(&self.params),
            self.lhs,
            join(&self.rhs),
            kind,
            self.margin,
            self.tol,
            if self.verdict { "pass" } else { "fail" },
            constant,
            self.resolution.0,
            self.resolution.1,
            seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_tolerance() {
        let r = |m: f64| MarginReport::new("x", &[], 0.0, &[], MarginKind::Difference, m, 1e-9, (4, 4), None);
        assert!(r(0.0).verdict);
        assert!(r(-1e-10).verdict);
        assert!(!r(-1e-8).verdict);
        assert!(!r(f64::NAN).verdict);
    }

    #[test]
    fn csv_row_has_header_arity() {
        let r = MarginReport::new(
            "poincare",
            &[("p", 3.0), ("s", 0.4)],
            1.5,
            &[("c1_term", 1.0), ("c2_term", 0.25)],
            MarginKind::Difference,
            0.25,
            1e-8,
            (31, 31),
            Some(4),
        )
        .with_constant(0.7);
        let cols = MarginReport::csv_header().split(',').count();
        assert_eq!(r.csv_row().split(',').count(), cols);
        assert!(r.csv_row().starts_with("poincare,p=3.0000000000000000e0;s="));
        assert!((r.rhs_total() - 1.25).abs() < 1e-15);
        assert_eq!(r.param("s"), Some(0.4));
    }
}
