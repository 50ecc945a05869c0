//! Tangent dynamics along a base trajectory.

use std::sync::Arc;

use fracsqg_core::fracops::riesz_perp;
use fracsqg_core::{PhysicalVectorField, SpectralField};
use fracsqg_sqg::{Dealias, Integrator, SQGState};
use ndarray::{Array2, Zip};

use crate::error::{config, Result};

/// Grid quantities of a base state reused by every tangent field.
#[derive(Debug, Clone)]
pub struct BaseFlow {
    u: PhysicalVectorField,
    grad: PhysicalVectorField,
}

impl BaseFlow {
    pub fn new(state: &SQGState) -> Self {
        Self {
            u: state.velocity().clone(),
            grad: state.q.gradient(),
        }
    }
}

/// `P(R^perp qbar . grad xi + R^perp xi . grad qbar)`, dealiased like the base
/// nonlinearity so it is its exact derivative.
pub fn linear_advection(xi: &SpectralField, base: &BaseFlow, dealias: Dealias) -> Result<SpectralField> {
    let a = base.u.dot(&xi.gradient())?;
    let b = riesz_perp(xi).dot(&base.grad)?;
    let mut out = a.zip_with(&b, |a, b| a + b)?.to_spectral();
    if dealias == Dealias::TwoThirds {
        out.dealias();
    }
    Ok(out)
}

/// `A xi = mu xi + linear_advection(xi)` with `mu` the integrator's linear symbol.
pub fn apply_linearized(xi: &SpectralField, base: &SQGState, integ: &Integrator) -> Result<SpectralField> {
    let adv = linear_advection(xi, &BaseFlow::new(base), integ.config().dealias)?;
    Ok(adv.axpy(1.0, &xi.apply_table(integ.mu().view()))?)
}

/// Advances `xi` over one base step given its advection term `n0` at the step
/// start and the base flow at the predictor stage.
pub(crate) fn tangent_step(
    integ: &Integrator,
    xi: &SpectralField,
    n0: &SpectralField,
    predictor: &BaseFlow,
) -> Result<SpectralField> {
    let dt = integ.config().dt;
    let dealias = integ.config().dealias;
    let decay = integ.mu().mapv(|m| (-m * dt).exp());
    let mut a = Array2::zeros(decay.dim());
    Zip::from(&mut a)
        .and(xi.coeffs())
        .and(n0.coeffs())
        .and(&decay)
        .for_each(|a, &x, &n, &e| *a = e * (x - dt * n));
    let a = SpectralField::new(Arc::clone(xi.spectrum()), a)?;
    let n1 = linear_advection(&a, predictor, dealias)?;
    let mut next = Array2::zeros(decay.dim());
    Zip::from(&mut next)
        .and(xi.coeffs())
        .and(n0.coeffs())
        .and(n1.coeffs())
        .and(&decay)
        .for_each(|o, &x, &n0, &n1, &e| *o = e * (x - 0.5 * dt * n0) - 0.5 * dt * n1);
    Ok(SpectralField::new(Arc::clone(xi.spectrum()), next)?)
}

/// One integrating-factor Heun step of the tangent equation along `base`,
/// the exact derivative of [`Integrator::step`] at `base.q` in direction `xi`.
pub fn linearized_step(xi: &SpectralField, base: &SQGState, integ: &Integrator) -> Result<SpectralField> {
    if !xi.spectrum().compatible(base.q.spectrum()) {
        return Err(config("tangent and base live on different grids"));
    }
    let mut next = base.clone();
    let predictor = integ.advance(&mut next)?;
    let n0 = linear_advection(xi, &BaseFlow::new(base), integ.config().dealias)?;
    tangent_step(integ, xi, &n0, &BaseFlow::new(&predictor))
}
