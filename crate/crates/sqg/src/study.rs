//! Paired runs comparing the regularized system with the limit system.

use fracsqg_core::SpectralField;
use rayon::prelude::*;

use crate::config::SQGConfig;
use crate::error::Result;
use crate::run::run;

#[derive(Debug, Clone, PartialEq)]
pub struct EpsRow {
    pub eps: f64,
    /// `||q^eps(T) - q^0(T)||_{L^2}`.
    pub l2_diff: f64,
    /// `||Lambda^{-1/2}(q^eps(T) - q^0(T))||`.
    pub dual_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsStudy {
    pub rows: Vec<EpsRow>,
    /// Both differences decrease strictly along the list.
    pub monotone: bool,
}

/// Runs `base` with `eps = 0` and with each listed `eps`, all from `q0`.
pub fn eps_convergence_study(base: &SQGConfig, eps_list: &[f64], q0: &SpectralField) -> Result<EpsStudy> {
    let mut limit_cfg = base.clone();
    limit_cfg.eps = 0.0;
    let sample = base.total_steps().max(1);
    let limit = run(&limit_cfg, q0, sample, None)?.state.q;
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            if eps == 0.0 {
                return Ok(EpsRow {
                    eps,
                    l2_diff: 0.0,
                    dual_diff: 0.0,
                });
            }
            let mut cfg = base.clone();
            cfg.eps = eps;
            let q = run(&cfg, q0, sample, None)?.state.q;
            let d = &q - &limit;
            Ok(EpsRow {
                eps,
                l2_diff: d.l2_norm(),
                dual_diff: d.sobolev_norm(-0.5),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows
        .windows(2)
        .all(|w| w[1].l2_diff < w[0].l2_diff && w[1].dual_diff < w[0].dual_diff);
    Ok(EpsStudy { rows, monotone })
}
