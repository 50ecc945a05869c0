//! Absorbing-ball experiments in D(Lambda^s).

use fracsqg_core::SpectralField;
use fracsqg_sqg::{Integrator, SQGState};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, Result};

/// Relative inflation of the tail supremum defining the empirical ball, so that
/// trajectories settling onto the attractor from inside do not count as exits.
pub const BALL_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct BallTrajectory {
    pub initial_norm: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// First sample time with `norm <= rho_star`.
    pub entry_time: Option<f64>,
    /// No sample after the entry leaves the ball.
    pub stays_inside: bool,
    pub tail_mean: f64,
    pub tail_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbsorbingReport {
    pub s: f64,
    pub tail_from: f64,
    /// Sup of `||Lambda^s q||` over every tail.
    pub tail_sup: f64,
    /// Empirical radius `(1 + BALL_MARGIN) tail_sup`.
    pub rho_star: f64,
    pub runs: Vec<BallTrajectory>,
    /// `max / min - 1` over the tail means.
    pub tail_spread: f64,
    /// Entry times increase with the initial norm.
    pub entry_monotone: bool,
}

/// Samples `||Lambda^s q||` every `sample_every` steps up to `t_final`.
pub fn norm_history(integ: &Integrator, q0: &SpectralField, s: f64, sample_every: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut state = integ.initial_state(q0)?;
    let steps = integ.config().total_steps();
    let mut times = vec![state.t];
    let mut norms = vec![state.q.sobolev_norm(s)];
    for step in 1..=steps {
        integ.step(&mut state)?;
        if step % sample_every == 0 || step == steps {
            times.push(state.t);
            norms.push(state.q.sobolev_norm(s));
        }
    }
    Ok((times, norms))
}

/// Runs every initial datum to `t_final` and compares the tails `t >= tail_from * t_final`.
pub fn absorbing_ball_experiment(
    integ: &Integrator,
    q0s: &[SpectralField],
    s: f64,
    tail_from: f64,
    sample_every: u64,
) -> Result<AbsorbingReport> {
    let alpha = integ.config().alpha;
    if !(s > 1.0 && s < 0.5 * (alpha + 1.0)) {
        return Err(config(format!("s = {s} outside (1, (alpha + 1)/2) = (1, {})", 0.5 * (alpha + 1.0))));
    }
    if q0s.is_empty() || !(0.0..1.0).contains(&tail_from) || sample_every == 0 {
        return Err(config("need initial data, tail_from in [0, 1) and sample_every >= 1"));
    }
    let histories = q0s
        .par_iter()
        .map(|q0| norm_history(integ, q0, s, sample_every))
        .collect::<Result<Vec<_>>>()?;
    let t_tail = tail_from * integ.config().t_final;
    let tails: Vec<(f64, f64)> = histories
        .iter()
        .map(|(t, n)| {
            let tail: Vec<f64> = t.iter().zip(n).filter(|(t, _)| **t >= t_tail).map(|(_, n)| *n).collect();
            let mean = tail.iter().sum::<f64>() / tail.len() as f64;
            (mean, tail.iter().copied().fold(0.0, f64::max))
        })
        .collect();
    let tail_sup = tails.iter().map(|t| t.1).fold(0.0, f64::max);
    let rho_star = (1.0 + BALL_MARGIN) * tail_sup;
    let runs: Vec<BallTrajectory> = histories
        .into_iter()
        .zip(&tails)
        .map(|((times, norms), &(tail_mean, tail_max))| {
            let entry = norms.iter().position(|&n| n <= rho_star);
            let stays_inside = entry.is_some_and(|i| norms[i..].iter().all(|&n| n <= rho_star));
            BallTrajectory {
                initial_norm: norms[0],
                entry_time: entry.map(|i| times[i]),
                times,
                norms,
                stays_inside,
                tail_mean,
                tail_max,
            }
        })
        .collect();
    let (lo, hi) = tails
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), t| (lo.min(t.0), hi.max(t.0)));
    let mut order: Vec<&BallTrajectory> = runs.iter().collect();
    order.sort_by(|a, b| a.initial_norm.total_cmp(&b.initial_norm));
    let entry_monotone = order.windows(2).all(|w| match (w[0].entry_time, w[1].entry_time) {
        (Some(a), Some(b)) => a <= b,
        _ => false,
    });
    Ok(AbsorbingReport {
        s,
        tail_from,
        tail_sup,
        rho_star,
        runs,
        tail_spread: if lo > 0.0 { hi / lo - 1.0 } else { f64::INFINITY },
        entry_monotone,
    })
}

/// Base state for tangent runs: the endpoint after `3 * absorbing_time` from `q0`.
pub fn attractor_proxy(integ: &Integrator, q0: &SpectralField, absorbing_time: f64) -> Result<SQGState> {
    let mut state = integ.initial_state(q0)?;
    let steps = (3.0 * absorbing_time / integ.config().dt).ceil() as u64;
    for _ in 0..steps {
        integ.step(&mut state)?;
    }
    Ok(state)
}
