//! Evolution of N-volumes of tangent elements along a base trajectory.

use fracsqg_core::SpectralField;
use fracsqg_sqg::{Integrator, SQGState};
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{orthonormalize, TangentBundle};
use crate::error::{config, AttractorError, Result};
use crate::tangent::{linear_advection, tangent_step, BaseFlow};
use crate::trace::nested_traces;

#[derive(Debug, Clone)]
pub struct VolumeOptions {
    pub n_max: usize,
    pub t_span: f64,
    pub ortho_every: usize,
    /// Relative Gaussian mixing of the initial eigenmode bundle.
    pub mix: f64,
    pub seed: u64,
    /// Fraction of `t_span` discarded before fitting rates.
    pub fit_from: f64,
}

impl VolumeOptions {
    pub fn new(n_max: usize, t_span: f64) -> Self {
        Self {
            n_max,
            t_span,
            ortho_every: 10,
            mix: 0.1,
            seed: 0,
            fit_from: 0.25,
        }
    }
}

/// `log V_N` (normalized to zero at the start), the instantaneous trace and its
/// running trapezoid integral, sampled at orthonormalization times.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeTrace {
    pub n: usize,
    pub times: Vec<f64>,
    pub log_volume: Vec<f64>,
    pub trace: Vec<f64>,
    pub integrated_trace: Vec<f64>,
    /// Least-squares slope of `log V_N` over the fit window.
    pub rate: f64,
    /// Time average of the trace over the fit window.
    pub mean_trace: f64,
    pub fit_from: f64,
}

impl VolumeTrace {
    fn from_samples(n: usize, samples: &[Sample], fit_from: f64) -> Self {
        let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
        let log_volume: Vec<f64> = samples.iter().map(|s| s.log_volume[..n].iter().sum()).collect();
        let trace: Vec<f64> = samples.iter().map(|s| s.trace[..n].iter().sum()).collect();
        let integrated_trace: Vec<f64> = samples.iter().map(|s| s.integral[..n].iter().sum()).collect();
        let start = times.iter().position(|&t| t >= fit_from).unwrap_or(times.len());
        let (rate, mean_trace) = if times.len() - start >= 2 {
            let last = times.len() - 1;
            let span = times[last] - times[start];
            (
                fit_slope(&times[start..], &log_volume[start..]),
                (integrated_trace[last] - integrated_trace[start]) / span,
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        Self {
            n,
            times,
            log_volume,
            trace,
            integrated_trace,
            rate,
            mean_trace,
            fit_from,
        }
    }

    /// `max |log V_N + int Trace| / max |int Trace|` over the samples.
    pub fn consistency(&self) -> f64 {
        let gap = self
            .log_volume
            .iter()
            .zip(&self.integrated_trace)
            .map(|(v, i)| (v + i).abs())
            .fold(0.0, f64::max);
        let scale = self.integrated_trace.iter().map(|i| i.abs()).fold(0.0, f64::max);
        if scale > 0.0 {
            gap / scale
        } else {
            gap
        }
    }

    pub fn csv_header() -> &'static str {
        "n,t,log_volume,trace,integrated_trace"
    }

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        (0..self.times.len()).map(move |i| {
            format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.n, self.times[i], self.log_volume[i], self.trace[i], self.integrated_trace[i]
            )
        })
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Per-direction quantities at one sample time; prefix sums give rank `N`.
#[derive(Debug, Clone)]
struct Sample {
    t: f64,
    log_volume: Vec<f64>,
    trace: Vec<f64>,
    integral: Vec<f64>,
}

fn advection_terms(integ: &Integrator, fields: &[SpectralField], flow: &BaseFlow) -> Result<Vec<SpectralField>> {
    let dealias = integ.config().dealias;
    fields.par_iter().map(|xi| linear_advection(xi, flow, dealias)).collect()
}

fn local_traces(integ: &Integrator, fields: &[SpectralField], adv: &[SpectralField]) -> Result<Vec<f64>> {
    let images = fields
        .iter()
        .zip(adv)
        .map(|(xi, n)| Ok(n.axpy(1.0, &xi.apply_table(integ.mu().view()))?))
        .collect::<Result<Vec<_>>>()?;
    nested_traces(fields, &images)
}

/// Evolves a bundle of `n_max` tangents from the lowest eigenmodes along the
/// trajectory of `base`, orthonormalizing every `ortho_every` steps. Returns one
/// trace for each `N = 1..=n_max`.
pub fn volume_decay_run(integ: &Integrator, base: &SQGState, opts: &VolumeOptions) -> Result<Vec<VolumeTrace>> {
    if !(opts.t_span > 0.0) || !(0.0..1.0).contains(&opts.fit_from) {
        return Err(config("volume run needs t_span > 0 and fit_from in [0, 1)"));
    }
    let initial = TangentBundle::eigenmodes(base.q.spectrum(), opts.n_max, opts.mix, opts.seed, opts.ortho_every)?;
    volume_decay_from(integ, base, &initial, opts)
}

/// [`volume_decay_run`] from a caller-supplied initial bundle.
pub fn volume_decay_from(
    integ: &Integrator,
    base: &SQGState,
    initial: &TangentBundle,
    opts: &VolumeOptions,
) -> Result<Vec<VolumeTrace>> {
    let n = initial.len();
    let dt = integ.config().dt;
    let steps = (opts.t_span / dt).round() as u64;
    let t0 = base.t;
    let fit_from = t0 + opts.fit_from * opts.t_span;
    let finish = |samples: &[Sample]| -> Vec<VolumeTrace> {
        (1..=n).map(|k| VolumeTrace::from_samples(k, samples, fit_from)).collect()
    };

    let (bundle, _) = orthonormalize(initial)?;
    let mut fields = bundle.fields().to_vec();
    let mut state = base.clone();
    let mut adv = advection_terms(integ, &fields, &BaseFlow::new(&state))?;
    let mut trace = local_traces(integ, &fields, &adv)?;
    let mut log_volume = vec![0.0; n];
    let mut integral = vec![0.0; n];
    let mut samples = vec![Sample {
        t: state.t,
        log_volume: log_volume.clone(),
        trace: trace.clone(),
        integral: integral.clone(),
    }];

    for step in 1..=steps {
        let predictor = integ.advance(&mut state)?;
        let pflow = BaseFlow::new(&predictor);
        fields = fields
            .par_iter()
            .zip(&adv)
            .map(|(xi, n0)| tangent_step(integ, xi, n0, &pflow))
            .collect::<Result<Vec<_>>>()?;
        let sample = step % opts.ortho_every as u64 == 0 || step == steps;
        if sample {
            match orthonormalize(&initial.with_fields(fields)) {
                Ok((b, logs)) => {
                    fields = b.fields().to_vec();
                    for (v, l) in log_volume.iter_mut().zip(&logs) {
                        *v += l;
                    }
                }
                Err(e @ AttractorError::Degenerate { .. }) => {
                    return Err(AttractorError::Aborted {
                        t: state.t,
                        reason: e.to_string(),
                        partial: finish(&samples),
                    })
                }
                Err(e) => return Err(e),
            }
        }
        adv = advection_terms(integ, &fields, &BaseFlow::new(&state))?;
        let next = match local_traces(integ, &fields, &adv) {
            Ok(t) => t,
            Err(e @ AttractorError::Degenerate { .. }) => {
                return Err(AttractorError::Aborted {
                    t: state.t,
                    reason: e.to_string(),
                    partial: finish(&samples),
                })
            }
            Err(e) => return Err(e),
        };
        for ((i, a), b) in integral.iter_mut().zip(&trace).zip(&next) {
            *i += 0.5 * dt * (a + b);
        }
        trace = next;
        if sample {
            samples.push(Sample {
                t: state.t,
                log_volume: log_volume.clone(),
                trace: trace.clone(),
                integral: integral.clone(),
            });
        }
    }
    Ok(finish(&samples))
}
