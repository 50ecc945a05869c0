//! Attractor dimension from the sign of volume contraction.

use serde::Serialize;

use crate::error::{config, Result};
use crate::volume::{fit_slope, VolumeTrace};

#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    /// Smallest `N` from which every listed rank has positive mean trace;
    /// `None` when the largest rank still expands.
    pub n0: Option<usize>,
    /// The same rule applied to `rate < 0`.
    pub n0_by_rate: Option<usize>,
    pub n_max: usize,
    pub ranks: Vec<usize>,
    pub mean_traces: Vec<f64>,
    pub rates: Vec<f64>,
    /// Mean trace at `n0`.
    pub margin: Option<f64>,
    /// Log-log slope of `|rate|` against `N` over the tail, when available.
    pub exponent: Option<f64>,
    pub exponent_from: Option<usize>,
    pub note: String,
}

fn first_of_tail(ranks: &[usize], ok: impl Fn(usize) -> bool) -> Option<usize> {
    let mut n0 = None;
    for i in (0..ranks.len()).rev() {
        if ok(i) {
            n0 = Some(ranks[i]);
        } else {
            break;
        }
    }
    n0
}

/// Fits `|rate| ~ N^k` over ranks `>= from`, all of which must contract.
pub fn growth_exponent(traces: &[VolumeTrace], from: usize) -> Option<f64> {
    let tail: Vec<&VolumeTrace> = traces.iter().filter(|t| t.n >= from).collect();
    if tail.len() < 2 || tail.iter().any(|t| !(t.rate < 0.0)) {
        return None;
    }
    let x: Vec<f64> = tail.iter().map(|t| (t.n as f64).ln()).collect();
    let y: Vec<f64> = tail.iter().map(|t| (-t.rate).ln()).collect();
    Some(fit_slope(&x, &y))
}

/// Dimension estimate over traces for consecutive ranks. The exponent is fitted
/// on ranks from `max(n0, n_max / 4)` upward.
pub fn dimension_estimate(traces: &[VolumeTrace]) -> Result<DimensionReport> {
    if traces.is_empty() {
        return Err(config("no volume traces"));
    }
    if traces.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return Err(config("volume traces must cover consecutive ranks"));
    }
    let ranks: Vec<usize> = traces.iter().map(|t| t.n).collect();
    let mean_traces: Vec<f64> = traces.iter().map(|t| t.mean_trace).collect();
    let rates: Vec<f64> = traces.iter().map(|t| t.rate).collect();
    let n0 = first_of_tail(&ranks, |i| mean_traces[i] > 0.0);
    let n0_by_rate = first_of_tail(&ranks, |i| rates[i] < 0.0);
    let n_max = *ranks.last().unwrap();
    let margin = n0.map(|n| mean_traces[n - ranks[0]]);
    let exponent_from = n0.map(|n| n.max(n_max / 4).max(ranks[0]));
    let exponent = exponent_from.and_then(|from| growth_exponent(traces, from));
    let note = match n0 {
        Some(n) => format!("volume elements of rank >= {n} contract"),
        None => format!("dimension exceeds N_max = {n_max}"),
    };
    Ok(DimensionReport {
        n0,
        n0_by_rate,
        n_max,
        ranks,
        mean_traces,
        rates,
        margin,
        exponent,
        exponent_from,
        note,
    })
}
