//! Runs every inequality over a seeded corpus and collects the reports.

use std::sync::Arc;

use fracsqg_core::{RectDomain, Spectrum};
use rayon::prelude::*;

use crate::cordoba::{cordoba_report, Phi};
use crate::error::Result;
use crate::interpolation::interpolation_check;
use crate::nonneg::nonnegativity_report;
use crate::poincare::poincare_margin;
use crate::power_domain::{power_domain_check, RefinementReport, GROWTH_TOL};
use crate::product::{product_ratio, ProductVariant};
use crate::report::{MarginKind, MarginReport};
use crate::testfield::{Generator, TestField};
use crate::trilinear::trilinear_ratio;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub domain: RectDomain,
    /// Mode counts per axis for the pointwise and Poincaré checks.
    pub modes: Vec<usize>,
    pub seeds: u64,
    /// Band limit of the random corpus.
    pub band: usize,
    /// Mode counts for the double-sum product checks, coarse then fine.
    pub product_modes: Vec<usize>,
    pub product_seeds: u64,
    /// Base mode count of the power-domain refinement ladder.
    pub power_modes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            domain: RectDomain::unit_square(),
            modes: vec![63, 127],
            seeds: 50,
            band: 16,
            product_modes: vec![31, 47],
            product_seeds: 10,
            power_modes: 31,
        }
    }
}

const RANDOM: Generator = Generator::RandomBandLimited { decay: 1.0 };

impl RefinementReport {
    /// CSV-compatible view; out-of-case parameters pass unconditionally.
    pub fn to_margin_report(&self) -> MarginReport {
        let asserted = self.verdict.is_some();
        let mut r = MarginReport::new(
            if asserted { "power_domain" } else { "power_domain_unasserted" },
            &[("beta", self.beta), ("s", self.s)],
            *self.norms.last().unwrap_or(&f64::NAN),
            &[("previous", self.norms.get(self.norms.len().wrapping_sub(2)).copied().unwrap_or(f64::NAN))],
            MarginKind::Difference,
            GROWTH_TOL - (self.growth - 1.0).abs(),
            0.0,
            *self.resolutions.last().unwrap_or(&(0, 0)),
            None,
        )
        .with_constant(self.growth);
        if !asserted {
            r = r.unasserted();
        }
        r
    }
}

fn collect(jobs: Vec<Box<dyn Fn() -> Result<Vec<MarginReport>> + Send + Sync + '_>>) -> Result<Vec<MarginReport>> {
    let parts: Vec<Result<Vec<MarginReport>>> = jobs.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// All reports in a fixed order, independent of scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<MarginReport>> {
    let mut jobs: Vec<Box<dyn Fn() -> Result<Vec<MarginReport>> + Send + Sync + '_>> = Vec::new();
    for &n in &cfg.modes {
        let sp = Spectrum::new(cfg.domain, n, n)?;
        let band = (cfg.band.min(n), cfg.band.min(n));
        for seed in 0..cfg.seeds {
            let sp = Arc::clone(&sp);
            jobs.push(Box::new(move || {
                let q = TestField::realize(&sp, RANDOM, seed, band)?;
                let f = q.field();
                let mut out = Vec::new();
                for s in [0.5, 1.0, 1.5] {
                    out.push(cordoba_report(f, s, Phi::Square, Some(seed))?);
                }
                // Kinked Phi(q) converges slowly under projection; reported only.
                out.push(cordoba_report(f, 1.0, Phi::AbsPower(3.0), Some(seed))?.unasserted());
                out.push(cordoba_report(f, 1.0, Phi::PositivePartSquare, Some(seed))?.unasserted());
                for p in [2.0, 4.0] {
                    for s in [0.5, 1.0, 1.5] {
                        out.push(poincare_margin(f, p, s, Some(seed))?);
                    }
                }
                for p in [3.0, 5.0, 6.0] {
                    out.push(poincare_margin(f, p, 0.4, Some(seed))?);
                }
                let radius = 0.2 * cfg.domain.lx().min(cfg.domain.ly());
                let b = TestField::realize(&sp, Generator::Bump { radius }, seed, sp.shape())?;
                let b2 = b.field().to_physical().map(|v| v * v);
                for s in [0.5, 1.0, 1.5] {
                    out.push(nonnegativity_report(&b2, s, Some(seed))?);
                }
                out.push(interpolation_check(f, 0.0, 1.0, 2.0, Some(seed))?);
                Ok(out)
            }));
        }
    }
    for &n in &cfg.product_modes {
        let sp = Spectrum::new(cfg.domain, n, n)?;
        let band = (cfg.band.min(n / 2).max(1), cfg.band.min(n / 2).max(1));
        for seed in 0..cfg.product_seeds {
            let sp = Arc::clone(&sp);
            jobs.push(Box::new(move || {
                let g = TestField::realize(&sp, RANDOM, 2 * seed, band)?;
                let h = TestField::realize(&sp, RANDOM, 2 * seed + 1, band)?;
                let (g, h) = (g.field(), h.field());
                let mut out = Vec::new();
                for beta in [0.3, 0.7] {
                    out.push(product_ratio(g, h, beta, ProductVariant::SobolevLebesgue { k: 2.0 / (1.0 - beta) }, Some(seed))?);
                    out.push(product_ratio(g, h, beta, ProductVariant::Bounded, Some(seed))?);
                    out.push(product_ratio(g, h, beta, ProductVariant::Holder { gamma: 0.5 * (1.0 + beta) }, Some(seed))?);
                }
                let w = TestField::realize(&sp, RANDOM, seed + 1000, band)?;
                for alpha in [1.2, 1.5, 1.8] {
                    out.push(trilinear_ratio(g, h, w.field(), alpha, 0.25 * (alpha - 1.0), Some(seed))?);
                }
                Ok(out)
            }));
        }
    }
    let sp = Spectrum::new(cfg.domain, cfg.power_modes, cfg.power_modes)?;
    let band = (cfg.band.min(cfg.power_modes), cfg.band.min(cfg.power_modes));
    for (beta, s) in [(0.6, 0.3), (1.0, 1.0), (1.5, 1.0), (2.0, 2.0), (0.6, 0.9)] {
        let sp = Arc::clone(&sp);
        jobs.push(Box::new(move || {
            let q = TestField::realize(&sp, RANDOM, 0, band)?;
            Ok(vec![power_domain_check(&q, beta, s)?.to_margin_report()])
        }));
    }
    collect(jobs)
}
