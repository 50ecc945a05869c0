use std::sync::Arc;

use fracsqg_core::{SpectralField, Spectrum};

use crate::error::{Result, SqgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    /// Zero every mode with `j > 2nx/3` or `k > 2ny/3` after each product.
    TwoThirds,
    None,
}

#[derive(Debug, Clone)]
pub struct SQGConfig {
    pub alpha: f64,
    /// `0` integrates the unregularized system.
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Time-independent forcing; it vanishes on the boundary by construction.
    pub forcing: SpectralField,
    pub dealias: Dealias,
    /// Limit on `dt max|u| N / min(lx, ly)`.
    pub cfl: f64,
    /// Exponents `p` of the recorded `L^p` norms.
    pub diag_p: Vec<f64>,
    /// Orders `s` of the recorded `||Lambda^s q||`.
    pub diag_s: Vec<f64>,
}

impl SQGConfig {
    /// Unforced configuration with the defaults: 2/3 dealiasing, CFL limit 0.5,
    /// `L^2` and `L^{1/delta}` norms with `delta = (alpha - 1)/4`, and `||Lambda q||`.
    pub fn new(spectrum: &Arc<Spectrum>, alpha: f64, eps: f64, dt: f64, t_final: f64) -> Result<Self> {
        let delta = 0.25 * (alpha - 1.0);
        let cfg = Self {
            alpha,
            eps,
            dt,
            t_final,
            forcing: SpectralField::zeros(Arc::clone(spectrum)),
            dealias: Dealias::TwoThirds,
            cfl: 0.5,
            diag_p: vec![2.0, 1.0 / delta],
            diag_s: vec![1.0],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_forcing(mut self, f: SpectralField) -> Result<Self> {
        self.forcing = f;
        self.validate()?;
        Ok(self)
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        self.forcing.spectrum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SqgError::Config(m));
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return bad(format!("alpha = {} must lie in (1,2)", self.alpha));
        }
        if !(self.eps >= 0.0 && self.eps < 1.0) {
            return bad(format!("eps = {} must lie in [0,1)", self.eps));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final = {} must be nonnegative", self.t_final));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return bad(format!("cfl = {} must be positive", self.cfl));
        }
        if self.diag_p.iter().any(|p| !(*p >= 1.0)) {
            return bad("diagnostic exponents p must be >= 1".into());
        }
        if self.forcing.coeffs().iter().any(|c| !c.is_finite()) {
            return bad("forcing has non-finite coefficients".into());
        }
        Ok(())
    }

    /// Number of steps to reach `t_final`.
    pub fn total_steps(&self) -> u64 {
        (self.t_final / self.dt).round() as u64
    }
}
