//! Integrating-factor Heun stepping.

use std::sync::Arc;

use fracsqg_core::fracops::{mollify, riesz_perp};
use fracsqg_core::{PhysicalVectorField, SpectralField, Spectrum};
use ndarray::{Array2, Zip};

use crate::config::{Dealias, SQGConfig};
use crate::error::{Result, SqgError};

/// `P(u . grad q)` with `u = R^perp q`, formed on the grid and projected,
/// dealiased by the 2/3 rule.
pub fn nonlinear_term(q: &SpectralField) -> SpectralField {
    nonlinear_term_with(q, &riesz_perp(q), Dealias::TwoThirds).expect("velocity built on the grid of q")
}

/// Same, with a precomputed velocity and a chosen dealiasing rule.
pub fn nonlinear_term_with(q: &SpectralField, u: &PhysicalVectorField, dealias: Dealias) -> Result<SpectralField> {
    let prod = u.dot(&q.gradient())?;
    let mut out = prod.to_spectral();
    if dealias == Dealias::TwoThirds {
        out.dealias();
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SQGState {
    pub t: f64,
    pub q: SpectralField,
    u: PhysicalVectorField,
    pub steps: u64,
}

impl SQGState {
    pub fn new(q: SpectralField, t: f64, steps: u64) -> Self {
        let u = riesz_perp(&q);
        Self { t, q, u, steps }
    }

    /// Velocity on the grid, kept in sync with `q`.
    pub fn velocity(&self) -> &PhysicalVectorField {
        &self.u
    }
}

/// Per-configuration tables: the linear symbol `mu = lambda^{alpha/2} + eps lambda`,
/// its exponential over one step, and the effective forcing.
#[derive(Debug, Clone)]
pub struct Integrator {
    cfg: SQGConfig,
    mu: Array2<f64>,
    decay: Array2<f64>,
    forcing: SpectralField,
}

impl Integrator {
    pub fn new(cfg: &SQGConfig) -> Result<Self> {
        cfg.validate()?;
        let sp = cfg.spectrum();
        let mu = sp.eigenvalues().mapv(|l| l.powf(0.5 * cfg.alpha) + cfg.eps * l);
        let decay = mu.mapv(|m| (-m * cfg.dt).exp());
        let forcing = if cfg.eps > 0.0 {
            mollify(cfg.eps, &cfg.forcing)?
        } else {
            cfg.forcing.clone()
        };
        Ok(Self {
            cfg: cfg.clone(),
            mu,
            decay,
            forcing,
        })
    }

    pub fn config(&self) -> &SQGConfig {
        &self.cfg
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        self.cfg.spectrum()
    }

    pub fn mu(&self) -> &Array2<f64> {
        &self.mu
    }

    /// `f`, or `J_eps f` when `eps > 0`.
    pub fn forcing(&self) -> &SpectralField {
        &self.forcing
    }

    /// Initial state: `q0`, or `J_eps q0` when `eps > 0`.
    pub fn initial_state(&self, q0: &SpectralField) -> Result<SQGState> {
        if !q0.spectrum().compatible(self.spectrum()) {
            return Err(SqgError::Config("initial data lives on a different grid".into()));
        }
        let q = if self.cfg.eps > 0.0 {
            mollify(self.cfg.eps, q0)?
        } else {
            q0.clone()
        };
        Ok(SQGState::new(q, 0.0, 0))
    }

    /// `dt max|u| N / min(lx, ly)` for the given velocity.
    pub fn cfl_number(&self, u: &PhysicalVectorField) -> f64 {
        let sp = self.spectrum();
        let n = sp.nx().max(sp.ny()) as f64;
        let l = sp.domain().lx().min(sp.domain().ly());
        self.cfg.dt * u.max_magnitude() * n / l
    }

    /// `-P(u.grad q) + F`.
    fn tendency(&self, q: &SpectralField, u: &PhysicalVectorField) -> Result<Array2<f64>> {
        let n = nonlinear_term_with(q, u, self.cfg.dealias)?;
        let mut out = self.forcing.coeffs().to_owned();
        out -= &n.coeffs();
        Ok(out)
    }

    /// One step: `a = E(q + dt N(q))`, `q' = E(q + dt/2 N(q)) + dt/2 N(a)`
    /// with `E = exp(-mu dt)` applied exactly.
    pub fn step(&self, state: &mut SQGState) -> Result<()> {
        self.advance(state).map(|_| ())
    }

    /// [`Integrator::step`], returning the predictor stage `a` (tangent steps need it).
    pub fn advance(&self, state: &mut SQGState) -> Result<SQGState> {
        let dt = self.cfg.dt;
        let number = self.cfl_number(&state.u);
        if !(number <= self.cfg.cfl) {
            return Err(SqgError::Cfl {
                t: state.t,
                max_u: state.u.max_magnitude(),
                dt,
                number,
                limit: self.cfg.cfl,
            });
        }
        let sp = self.spectrum();
        let q = state.q.coeffs();
        let n0 = self.tendency(&state.q, &state.u)?;
        let mut a = Array2::zeros(q.dim());
        Zip::from(&mut a).and(q).and(&n0).and(&self.decay).for_each(|a, &q, &n, &e| *a = e * (q + dt * n));
        let a = SQGState::new(SpectralField::new(Arc::clone(sp), a)?, state.t + dt, state.steps + 1);
        let n1 = self.tendency(&a.q, &a.u)?;
        let mut next = Array2::zeros(q.dim());
        Zip::from(&mut next)
            .and(q)
            .and(&n0)
            .and(&n1)
            .and(&self.decay)
            .for_each(|out, &q, &n0, &n1, &e| *out = e * (q + 0.5 * dt * n0) + 0.5 * dt * n1);
        let t_next = state.t + dt;
        if next.iter().any(|c| !c.is_finite()) {
            return Err(SqgError::Divergence { t: t_next });
        }
        let q_next = SpectralField::new(Arc::clone(sp), next)?;
        *state = SQGState::new(q_next, t_next, state.steps + 1);
        Ok(a)
    }
}

/// One step from `state` under `cfg`; prefer [`Integrator`] when stepping repeatedly.
pub fn step(state: &SQGState, cfg: &SQGConfig) -> Result<SQGState> {
    let integ = Integrator::new(cfg)?;
    let mut next = state.clone();
    integ.step(&mut next)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracsqg_core::fracops::{divergence, VelocityCoefficients};
    use fracsqg_core::generators::random_band_limited;

    #[test]
    fn single_mode_and_zero_have_no_self_advection() {
        let sp = Spectrum::unit_square(24).unwrap();
        let q = SpectralField::single_mode(Arc::clone(&sp), 1, 1, 2.0).unwrap();
        assert!(nonlinear_term(&q).max_abs_coeff() < 1e-13);
        assert_eq!(nonlinear_term(&SpectralField::zeros(Arc::clone(&sp))).max_abs_coeff(), 0.0);
    }

    #[test]
    fn single_mode_linear_flow_is_exact() {
        let sp = Spectrum::unit_square(16).unwrap();
        let cfg = SQGConfig::new(&sp, 1.5, 0.0, 1e-2, 1.0).unwrap();
        let q0 = SpectralField::single_mode(Arc::clone(&sp), 2, 3, 0.7).unwrap();
        let s1 = step(&SQGState::new(q0.clone(), 0.0, 0), &cfg).unwrap();
        let mu = sp.eigenvalue(2, 3).powf(0.75);
        let expect = 0.7 * (-mu * 1e-2).exp();
        assert!((s1.q.coeff(2, 3) - expect).abs() <= 1e-12 * expect);
        assert!(s1.q.l2_norm() - expect.abs() <= 1e-12);
        assert_eq!(s1.steps, 1);
    }

    #[test]
    fn cfl_violation_reports_velocity() {
        let sp = Spectrum::unit_square(32).unwrap();
        let cfg = SQGConfig::new(&sp, 1.5, 0.0, 0.1, 1.0).unwrap();
        let q0 = random_band_limited(&sp, 1, (8, 8), 0.0).unwrap().scaled(10.0);
        match step(&SQGState::new(q0, 0.0, 0), &cfg) {
            Err(SqgError::Cfl { max_u, .. }) => assert!(max_u > 0.0),
            other => panic!("expected CFL error, got {other:?}"),
        }
    }

    #[test]
    fn state_velocity_is_divergence_free() {
        let sp = Spectrum::unit_square(32).unwrap();
        let q = random_band_limited(&sp, 2, (20, 20), 1.0).unwrap();
        let div = divergence(&VelocityCoefficients::from_scalar(&q));
        assert!(div.iter().all(|d| d.abs() <= 1e-12 * q.sobolev_norm(1.0)));
        let st = SQGState::new(q, 0.0, 0);
        assert_eq!(st.velocity().x().dim(), sp.grid_shape());
    }
}
