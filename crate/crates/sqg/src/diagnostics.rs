//! Sampled norms and energy bookkeeping.

use std::io::Write;

use ndarray::Zip;

use crate::error::{Result, SqgError};
use crate::integrator::{nonlinear_term_with, Integrator, SQGState};

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub step: u64,
    pub l2: f64,
    /// `||Lambda^{alpha/2} q||`.
    pub dissipation_norm: f64,
    /// `||Lambda^{-1/2} q||`.
    pub dual_norm: f64,
    pub lp: Vec<(f64, f64)>,
    pub sobolev: Vec<(f64, f64)>,
    /// `sum mu_jk q_jk^2 = ||Lambda^{alpha/2} q||^2 + eps ||Lambda q||^2`.
    pub dissipation: f64,
    /// `(F, q)` with the effective forcing.
    pub work: f64,
    /// Balance residual over the interval ending here; `None` on the first record.
    pub energy_residual: Option<f64>,
    /// `|(P(u.grad q), q)| / (||P(u.grad q)|| ||q||)`.
    pub cancellation: f64,
}

impl DiagnosticRecord {
    pub fn measure(integ: &Integrator, state: &SQGState) -> Result<Self> {
        let cfg = integ.config();
        let q = &state.q;
        let qp = q.to_physical();
        let lp = cfg
            .diag_p
            .iter()
            .map(|&p| Ok((p, qp.lp_norm(p)?)))
            .collect::<Result<Vec<_>>>()?;
        let sobolev = cfg.diag_s.iter().map(|&s| (s, q.sobolev_norm(s))).collect();
        let dissipation = Zip::from(q.coeffs()).and(integ.mu()).fold(0.0, |acc, c, m| acc + m * c * c);
        let n = nonlinear_term_with(q, state.velocity(), cfg.dealias)?;
        let denom = n.l2_norm() * q.l2_norm();
        let cancellation = if denom > 0.0 { n.inner(q)?.abs() / denom } else { 0.0 };
        Ok(Self {
            t: state.t,
            step: state.steps,
            l2: q.l2_norm(),
            dissipation_norm: q.sobolev_norm(0.5 * cfg.alpha),
            dual_norm: q.sobolev_norm(-0.5),
            lp,
            sobolev,
            dissipation,
            work: integ.forcing().inner(q)?,
            energy_residual: None,
            cancellation,
        })
    }

    pub fn csv_header(&self) -> String {
        let mut h = String::from("t,step,l2,dissipation_norm,dual_norm");
        for (p, _) in &self.lp {
            h.push_str(&format!(",lp_{p}"));
        }
        for (s, _) in &self.sobolev {
            h.push_str(&format!(",lambda_{s}"));
        }
        h.push_str(",dissipation,work,energy_residual,cancellation");
        h
    }

    pub fn csv_row(&self) -> String {
        let mut r = format!(
            "{:.16e},{},{:.16e},{:.16e},{:.16e}",
            self.t, self.step, self.l2, self.dissipation_norm, self.dual_norm
        );
        for (_, v) in self.lp.iter().chain(self.sobolev.iter()) {
            r.push_str(&format!(",{v:.16e}"));
        }
        let res = self.energy_residual.map(|v| format!("{v:.16e}")).unwrap_or_default();
        r.push_str(&format!(",{:.16e},{:.16e},{},{:.16e}", self.dissipation, self.work, res, self.cancellation));
        r
    }

    pub fn is_finite(&self) -> bool {
        let vals = [self.t, self.l2, self.dissipation_norm, self.dual_norm, self.dissipation, self.work, self.cancellation];
        vals.iter().all(|v| v.is_finite())
            && self.lp.iter().chain(self.sobolev.iter()).all(|(_, v)| v.is_finite())
            && self.energy_residual.is_none_or(f64::is_finite)
    }
}

/// `(a - b) / (ln a - ln b)`, the exact interval mean of an exponential
/// through `a` and `b`; the arithmetic mean when that is undefined.
fn log_mean(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 && (a - b).abs() > 1e-12 * a.max(b) {
        (a - b) / (a.ln() - b.ln())
    } else {
        0.5 * (a + b)
    }
}

/// `|d||q||^2/dt + 2 D - 2 (F, q)|` over one interval, the rate by differencing,
/// `D` by its log-mean and `(F, q)` by the trapezoid rule.
pub(crate) fn interval_residual(a: &DiagnosticRecord, b: &DiagnosticRecord) -> f64 {
    let dt = b.t - a.t;
    let rate = (b.l2 * b.l2 - a.l2 * a.l2) / dt;
    (rate + 2.0 * log_mean(a.dissipation, b.dissipation) - (a.work + b.work)).abs()
}

/// Largest interval residual across a window of uniformly spaced records.
pub fn energy_balance_residual(window: &[DiagnosticRecord]) -> Result<f64> {
    if window.len() < 2 {
        return Err(SqgError::Diagnostics("energy balance needs at least two records".into()));
    }
    let h = window[1].t - window[0].t;
    if !(h > 0.0) {
        return Err(SqgError::Diagnostics("records must advance in time".into()));
    }
    let mut worst: f64 = 0.0;
    for w in window.windows(2) {
        let hw = w[1].t - w[0].t;
        if (hw - h).abs() > 1e-9 * h {
            return Err(SqgError::Diagnostics(format!("non-uniform sample spacing: {hw} vs {h}")));
        }
        worst = worst.max(interval_residual(&w[0], &w[1]));
    }
    Ok(worst)
}

pub fn write_csv<W: Write>(mut out: W, records: &[DiagnosticRecord]) -> Result<()> {
    if let Some(first) = records.first() {
        writeln!(out, "{}", first.csv_header())?;
    }
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
