//! Command execution and artifact emission.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use fracsqg_attractor::{attractor_proxy, dimension_estimate, volume_decay_run, write_volume_csv, VolumeOptions};
use fracsqg_core::{SpectralField, Spectrum};
use fracsqg_ineqlab::{run_suite, MarginReport};
use fracsqg_sqg::{
    eps_convergence_study, read_checkpoint, run, run_from, write_csv, Integrator, SQGConfig,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_config, Command, RunConfig};
use crate::error::{invalid, Result};
use crate::manifest::{unix_now, ArtifactWriter, Manifest, MANIFEST};

/// Files written by each command, besides the manifest.
pub const VERIFY_CSV: &str = "verify.csv";
pub const SUMMARY: &str = "summary.json";
pub const DIAGNOSTICS: &str = "diagnostics.csv";
pub const CHECKPOINT: &str = "checkpoint.fsqg";
pub const VOLUME_CSV: &str = "volume.csv";
pub const DIMENSION: &str = "dimension.json";
pub const EPS_STUDY: &str = "eps_study.csv";
pub const RESOLUTION_STUDY: &str = "resolution_study.csv";

#[derive(Debug, Clone)]
pub struct Outcome {
    pub failures: usize,
    pub manifest: Manifest,
}

/// Parses `config_path`, runs `command` into `out`, and always writes the
/// manifest. Configuration errors surface before any artifact is created.
pub fn execute(command: Command, config_path: &Path, out: &Path, seed: Option<u64>, threads: Option<usize>) -> Result<Outcome> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = parse_config(&text, command, seed)?;
    let started = unix_now();
    let mut w = ArtifactWriter::new(out)?;
    let result = dispatch(&cfg, &mut w);
    let (status, failures, error) = match &result {
        Ok(0) => ("ok", Some(0), None),
        Ok(n) => ("failed", Some(*n), None),
        Err(e) => ("error", None, Some(e.to_string())),
    };
    let manifest = Manifest {
        command,
        seed: cfg.seed(),
        threads,
        status: status.to_string(),
        failures,
        error,
        artifacts: w.artifacts.clone(),
        started_unix: started,
        finished_unix: unix_now(),
    };
    w.write_json(MANIFEST, &manifest)?;
    result.map(|failures| Outcome { failures, manifest })
}

/// Runs the command, returning the number of failed checks.
pub fn dispatch(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<usize> {
    match cfg.command {
        Command::Verify => verify(cfg, w),
        Command::Simulate => simulate(cfg, w),
        Command::Attractor => attractor(cfg, w),
        Command::Convergence => convergence(cfg, w),
    }
}

#[derive(Debug, Default, Serialize)]
struct Family {
    total: usize,
    failures: usize,
    min_margin: Option<f64>,
    constant_min: Option<f64>,
    constant_max: Option<f64>,
}

fn family_of(id: &str) -> &str {
    let id = id.split('[').next().unwrap_or(id);
    if id.starts_with("product") {
        "product"
    } else if id.starts_with("power_domain") {
        "power_domain"
    } else {
        id
    }
}

fn verify(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<usize> {
    let reports: Vec<MarginReport> = run_suite(&cfg.suite)?
        .into_iter()
        .map(|r| match cfg.file.tolerances.get(family_of(&r.id)) {
            Some(&f) => r.with_tol_scale(f),
            None => r,
        })
        .collect();
    w.write(VERIFY_CSV, |out| {
        writeln!(out, "{}", MarginReport::csv_header())?;
        for r in &reports {
            writeln!(out, "{}", r.csv_row())?;
        }
        Ok(())
    })?;
    let mut families: BTreeMap<String, Family> = BTreeMap::new();
    for r in &reports {
        let f = families.entry(r.id.clone()).or_default();
        f.total += 1;
        f.failures += usize::from(!r.verdict);
        if r.margin.is_finite() {
            f.min_margin = Some(f.min_margin.map_or(r.margin, |m| m.min(r.margin)));
        }
        if let Some(c) = r.empirical_constant.filter(|c| c.is_finite()) {
            f.constant_min = Some(f.constant_min.map_or(c, |m| m.min(c)));
            f.constant_max = Some(f.constant_max.map_or(c, |m| m.max(c)));
        }
    }
    let failures = reports.iter().filter(|r| !r.verdict).count();
    w.write_json(
        SUMMARY,
        &json!({
            "command": "verify",
            "total": reports.len(),
            "passed": reports.len() - failures,
            "failures": failures,
            "families": families,
        }),
    )?;
    Ok(failures)
}

fn simulate(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<usize> {
    let sqg = cfg.sqg()?;
    let integ = Integrator::new(sqg)?;
    let state = match &cfg.file.simulate.resume {
        Some(path) => read_checkpoint(path)?.into_state(sqg)?,
        None => integ.initial_state(&cfg.initial()?)?,
    };
    let ck = w.begin(CHECKPOINT);
    let out = run_from(&integ, state, cfg.file.simulate.sample_every, Some(&ck))?;
    w.done(CHECKPOINT);
    w.write(DIAGNOSTICS, |o| Ok(write_csv(o, &out.records)?))?;
    let residual = out.records.iter().filter_map(|r| r.energy_residual).fold(0.0, f64::max);
    w.write_json(
        SUMMARY,
        &json!({
            "command": "simulate",
            "failures": 0,
            "steps": out.state.steps,
            "t": out.state.t,
            "records": out.records.len(),
            "final_l2": out.state.q.l2_norm(),
            "max_energy_residual": residual,
        }),
    )?;
    Ok(0)
}

/// Volume traces whose log-volume and integrated trace disagree by more than this count as failures.
pub const CONSISTENCY_TOL: f64 = 0.01;

fn attractor(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<usize> {
    let sqg = cfg.sqg()?;
    let a = &cfg.file.attractor;
    let integ = Integrator::new(sqg)?;
    let base = attractor_proxy(&integ, &cfg.initial()?, a.absorbing_time)?;
    let opts = VolumeOptions {
        n_max: a.n_max,
        t_span: a.t_span,
        ortho_every: a.ortho_every,
        mix: a.mix,
        seed: cfg.seed(),
        fit_from: a.fit_from,
    };
    let traces = volume_decay_run(&integ, &base, &opts)?;
    w.write(VOLUME_CSV, |o| Ok(write_volume_csv(o, &traces)?))?;
    let report = dimension_estimate(&traces)?;
    let consistency: Vec<f64> = traces.iter().map(|t| t.consistency()).collect();
    let failures = consistency.iter().filter(|c| !(**c <= CONSISTENCY_TOL)).count();
    w.write_json(
        DIMENSION,
        &json!({
            "alpha": sqg.alpha,
            "base_time": base.t,
            "dimension": report,
            "consistency": consistency,
            "consistency_tol": CONSISTENCY_TOL,
            "failures": failures,
        }),
    )?;
    Ok(failures)
}

fn convergence(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<usize> {
    let sqg = cfg.sqg()?;
    let q0 = cfg.initial()?;
    let mut base = sqg.clone();
    base.eps = 0.0;
    let study = eps_convergence_study(&base, &cfg.file.convergence.eps, &q0)?;
    w.write(EPS_STUDY, |o| {
        writeln!(o, "eps,l2_diff,dual_diff")?;
        for r in &study.rows {
            writeln!(o, "{:.16e},{:.16e},{:.16e}", r.eps, r.l2_diff, r.dual_diff)?;
        }
        Ok(())
    })?;
    let mut failures = usize::from(!study.monotone);
    let mut resolution_monotone = None;
    if !cfg.file.convergence.resolutions.is_empty() {
        let rows = resolution_study(sqg, &q0, &cfg.file.convergence.resolutions)?;
        w.write(RESOLUTION_STUDY, |o| {
            writeln!(o, "n,l2_diff,dual_diff")?;
            for (n, l2, dual) in &rows {
                writeln!(o, "{n},{l2:.16e},{dual:.16e}")?;
            }
            Ok(())
        })?;
        let mono = rows.windows(2).all(|p| p[1].1 <= p[0].1);
        failures += usize::from(!mono);
        resolution_monotone = Some(mono);
    }
    w.write_json(
        SUMMARY,
        &json!({
            "command": "convergence",
            "eps_monotone": study.monotone,
            "resolution_monotone": resolution_monotone,
            "failures": failures,
        }),
    )?;
    Ok(failures)
}

/// Runs `cfg` at each square resolution from the same (resampled) data and
/// measures `q(T)` against the finest run. Rows are sorted by resolution.
pub fn resolution_study(cfg: &SQGConfig, q0: &SpectralField, resolutions: &[usize]) -> Result<Vec<(usize, f64, f64)>> {
    let mut ns = resolutions.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let finest = *ns.last().ok_or_else(|| invalid("no resolutions"))?;
    let domain = *cfg.spectrum().domain();
    let finals = ns
        .par_iter()
        .map(|&n| {
            let sp = Spectrum::new(domain, n, n)?;
            let mut c = SQGConfig::new(&sp, cfg.alpha, cfg.eps, cfg.dt, cfg.t_final)?.with_forcing(cfg.forcing.resample(&sp)?)?;
            c.dealias = cfg.dealias;
            c.cfl = cfg.cfl;
            let q = q0.resample(&sp)?;
            let steps = c.total_steps().max(1);
            Ok(run(&c, &q, steps, None)?.state.q)
        })
        .collect::<Result<Vec<SpectralField>>>()?;
    let fine_sp = Arc::clone(finals.last().unwrap().spectrum());
    let fine = finals.last().unwrap();
    ns.iter()
        .zip(&finals)
        .filter(|(n, _)| **n != finest)
        .map(|(&n, q)| {
            let d = &q.resample(&fine_sp)? - fine;
            Ok((n, d.l2_norm(), d.sobolev_norm(-0.5)))
        })
        .collect()
}
