//! Run configuration: a strict TOML schema validated before any compute.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use fracsqg_core::generators::random_band_limited;
use fracsqg_core::{RectDomain, SpectralField, Spectrum};
use fracsqg_ineqlab::SuiteConfig;
use fracsqg_sqg::{Dealias, SQGConfig};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Verify,
    Simulate,
    Attractor,
    Convergence,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verify" => Ok(Self::Verify),
            "simulate" => Ok(Self::Simulate),
            "attractor" => Ok(Self::Attractor),
            "convergence" => Ok(Self::Convergence),
            other => Err(invalid(format!("unknown command {other:?}"))),
        }
    }
}

/// Inequality families whose tolerances may be rescaled.
pub const TOLERANCE_FAMILIES: [&str; 7] = [
    "cordoba",
    "poincare",
    "nonnegativity",
    "interpolation",
    "product",
    "trilinear",
    "power_domain",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default = "one")]
    pub lx: f64,
    #[serde(default = "one")]
    pub ly: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self { lx: 1.0, ly: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSpec {
    pub alpha: f64,
    #[serde(default)]
    pub eps: f64,
    /// Sets the diagnostic exponent `p = 1/delta`; defaults to `(alpha - 1)/4`.
    pub delta: Option<f64>,
    pub dt: f64,
    pub t_final: f64,
    pub cfl: Option<f64>,
    #[serde(default = "yes")]
    pub dealias: bool,
}

/// A seeded field: band-limited random scaled to `max |.| = amplitude`, or one mode.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    #[default]
    Zero,
    Random {
        amplitude: f64,
        band: usize,
        #[serde(default = "one")]
        decay: f64,
        seed: Option<u64>,
    },
    Mode {
        j: usize,
        k: usize,
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    #[serde(default = "ten")]
    pub sample_every: u64,
    pub resume: Option<PathBuf>,
}

impl Default for SimulateSpec {
    fn default() -> Self {
        Self {
            sample_every: 10,
            resume: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub modes: Option<Vec<usize>>,
    pub seeds: Option<u64>,
    pub band: Option<usize>,
    pub product_modes: Option<Vec<usize>>,
    pub product_seeds: Option<u64>,
    pub power_modes: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorSpec {
    #[serde(default = "thirty_two")]
    pub n_max: usize,
    #[serde(default = "one")]
    pub t_span: f64,
    #[serde(default = "ten_usize")]
    pub ortho_every: usize,
    #[serde(default = "tenth")]
    pub mix: f64,
    #[serde(default = "quarter")]
    pub fit_from: f64,
    /// Empirical absorbing time; the base is spun up for three times this.
    #[serde(default = "one")]
    pub absorbing_time: f64,
}

impl Default for AttractorSpec {
    fn default() -> Self {
        Self {
            n_max: 32,
            t_span: 1.0,
            ortho_every: 10,
            mix: 0.1,
            fit_from: 0.25,
            absorbing_time: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    #[serde(default = "eps_ladder")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub resolutions: Vec<usize>,
}

impl Default for ConvergenceSpec {
    fn default() -> Self {
        Self {
            eps: eps_ladder(),
            resolutions: Vec::new(),
        }
    }
}

/// The document as written.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub domain: DomainSpec,
    pub grid: Option<GridSpec>,
    pub physics: Option<PhysicsSpec>,
    #[serde(default)]
    pub forcing: FieldSpec,
    #[serde(default)]
    pub initial: FieldSpec,
    #[serde(default)]
    pub simulate: SimulateSpec,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default)]
    pub attractor: AttractorSpec,
    #[serde(default)]
    pub convergence: ConvergenceSpec,
    /// Multipliers of the default tolerance per inequality family.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// A validated configuration ready for dispatch.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub file: ConfigFile,
    pub domain: RectDomain,
    spectrum: Option<Arc<Spectrum>>,
    sqg: Option<SQGConfig>,
    pub suite: SuiteConfig,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn ten() -> u64 {
    10
}
fn ten_usize() -> usize {
    10
}
fn thirty_two() -> usize {
    32
}
fn tenth() -> f64 {
    0.1
}
fn quarter() -> f64 {
    0.25
}
fn eps_ladder() -> Vec<f64> {
    vec![0.1, 0.05, 0.025, 0.0125]
}

impl FieldSpec {
    fn validate(&self, what: &str, sp: &Spectrum) -> Result<()> {
        match *self {
            FieldSpec::Zero => Ok(()),
            FieldSpec::Random {
                amplitude, band, decay, ..
            } => {
                if !(amplitude.is_finite() && amplitude >= 0.0) {
                    return Err(invalid(format!("{what}.amplitude = {amplitude} violates amplitude >= 0")));
                }
                if band == 0 || band > sp.nx().min(sp.ny()) {
                    return Err(invalid(format!("{what}.band = {band} violates 1 <= band <= grid size")));
                }
                if !(decay.is_finite() && decay >= 0.0) {
                    return Err(invalid(format!("{what}.decay = {decay} violates decay >= 0")));
                }
                Ok(())
            }
            FieldSpec::Mode { j, k, amplitude } => {
                if j == 0 || k == 0 || j > sp.nx() || k > sp.ny() {
                    return Err(invalid(format!("{what} mode ({j},{k}) outside the grid")));
                }
                if !amplitude.is_finite() {
                    return Err(invalid(format!("{what}.amplitude must be finite")));
                }
                Ok(())
            }
        }
    }

    /// Realizes the field; random fields default to `default_seed`.
    pub fn realize(&self, sp: &Arc<Spectrum>, default_seed: u64) -> Result<SpectralField> {
        Ok(match *self {
            FieldSpec::Zero => SpectralField::zeros(Arc::clone(sp)),
            FieldSpec::Random {
                amplitude,
                band,
                decay,
                seed,
            } => {
                let f = random_band_limited(sp, seed.unwrap_or(default_seed), (band, band), decay)?;
                let m = f.to_physical().max_abs();
                if m > 0.0 {
                    f.scaled(amplitude / m)
                } else {
                    f
                }
            }
            FieldSpec::Mode { j, k, amplitude } => SpectralField::single_mode(Arc::clone(sp), j, k, amplitude)?,
        })
    }
}

impl RunConfig {
    pub fn spectrum(&self) -> Result<&Arc<Spectrum>> {
        self.spectrum.as_ref().ok_or_else(|| invalid("missing [grid] section"))
    }

    pub fn sqg(&self) -> Result<&SQGConfig> {
        self.sqg.as_ref().ok_or_else(|| invalid("missing [physics] section"))
    }

    pub fn seed(&self) -> u64 {
        self.file.seed
    }

    pub fn initial(&self) -> Result<SpectralField> {
        self.file.initial.realize(self.spectrum()?, self.file.seed)
    }
}

/// Parses and validates `text` for `command`. A `command` key in the document
/// must agree with the requested one; `seed` overrides the document's seed.
pub fn parse_config(text: &str, command: Command, seed: Option<u64>) -> Result<RunConfig> {
    let mut file: ConfigFile = toml::from_str(text)?;
    if let Some(c) = file.command {
        if c != command {
            return Err(invalid(format!("document is for {c:?}, not {command:?}")));
        }
    }
    if let Some(s) = seed {
        file.seed = s;
    }
    validate(file, command)
}

fn validate(file: ConfigFile, command: Command) -> Result<RunConfig> {
    let d = &file.domain;
    if !(d.lx > 0.0 && d.lx.is_finite() && d.ly > 0.0 && d.ly.is_finite()) {
        return Err(invalid(format!("domain ({}, {}) violates lx, ly > 0", d.lx, d.ly)));
    }
    let domain = RectDomain::new(d.lx, d.ly)?;

    let spectrum = match &file.grid {
        Some(g) => {
            let ny = g.ny.unwrap_or(g.n);
            if g.n < 4 || ny < 4 {
                return Err(invalid(format!("grid ({}, {ny}) violates n >= 4", g.n)));
            }
            Some(Spectrum::new(domain, g.n, ny)?)
        }
        None => None,
    };

    let needs_flow = command != Command::Verify;
    if needs_flow && spectrum.is_none() {
        return Err(invalid("missing required section [grid]"));
    }
    if needs_flow && file.physics.is_none() {
        return Err(invalid("missing required section [physics]"));
    }

    let sqg = match (&file.physics, &spectrum) {
        (Some(p), Some(sp)) => {
            if !(p.alpha > 1.0 && p.alpha < 2.0) {
                return Err(invalid(format!("physics.alpha = {} violates α ∈ (1,2)", p.alpha)));
            }
            if !(p.eps >= 0.0 && p.eps < 1.0) {
                return Err(invalid(format!("physics.eps = {} violates ε ∈ [0,1)", p.eps)));
            }
            if !(p.dt > 0.0 && p.dt.is_finite()) {
                return Err(invalid(format!("physics.dt = {} violates dt > 0", p.dt)));
            }
            if !(p.t_final >= 0.0 && p.t_final.is_finite()) {
                return Err(invalid(format!("physics.t_final = {} violates t_final >= 0", p.t_final)));
            }
            file.forcing.validate("forcing", sp)?;
            file.initial.validate("initial", sp)?;
            let mut cfg = SQGConfig::new(sp, p.alpha, p.eps, p.dt, p.t_final)?
                .with_forcing(file.forcing.realize(sp, file.seed ^ 0xf0)?)?;
            if let Some(delta) = p.delta {
                if !(delta > 0.0 && delta <= 1.0) {
                    return Err(invalid(format!("physics.delta = {delta} violates δ ∈ (0,1]")));
                }
                cfg.diag_p = vec![2.0, 1.0 / delta];
            }
            if let Some(c) = p.cfl {
                cfg.cfl = c;
            }
            if !p.dealias {
                cfg.dealias = Dealias::None;
            }
            cfg.validate()?;
            Some(cfg)
        }
        _ => None,
    };

    if file.simulate.sample_every == 0 {
        return Err(invalid("simulate.sample_every violates sample_every >= 1"));
    }

    let mut suite = SuiteConfig {
        domain,
        ..SuiteConfig::default()
    };
    let v = &file.verify;
    if let Some(m) = &v.modes {
        suite.modes = m.clone();
    }
    if let Some(s) = v.seeds {
        suite.seeds = s;
    }
    if let Some(b) = v.band {
        suite.band = b;
    }
    if let Some(m) = &v.product_modes {
        suite.product_modes = m.clone();
    }
    if let Some(s) = v.product_seeds {
        suite.product_seeds = s;
    }
    if let Some(m) = v.power_modes {
        suite.power_modes = m;
    }
    if suite.modes.is_empty() || suite.modes.iter().any(|&m| m < 8) {
        return Err(invalid("verify.modes violates non-empty with every entry >= 8"));
    }
    if suite.product_modes.is_empty() || suite.product_modes.iter().any(|&m| m < 8) {
        return Err(invalid("verify.product_modes violates non-empty with every entry >= 8"));
    }
    if suite.seeds == 0 || suite.product_seeds == 0 {
        return Err(invalid("verify.seeds and verify.product_seeds violate seeds >= 1"));
    }
    let min_modes = suite.modes.iter().chain(&suite.product_modes).copied().min().unwrap_or(0);
    if suite.band == 0 || suite.band > min_modes {
        return Err(invalid(format!("verify.band = {} violates 1 <= band <= smallest grid", suite.band)));
    }
    if suite.power_modes < 8 {
        return Err(invalid("verify.power_modes violates power_modes >= 8"));
    }
    for (k, f) in &file.tolerances {
        if !TOLERANCE_FAMILIES.contains(&k.as_str()) {
            return Err(invalid(format!("unknown tolerance family {k:?}; expected one of {TOLERANCE_FAMILIES:?}")));
        }
        if !(*f > 0.0 && f.is_finite()) {
            return Err(invalid(format!("tolerances.{k} = {f} violates factor > 0")));
        }
    }

    let a = &file.attractor;
    if let Some(sp) = &spectrum {
        if a.n_max == 0 || a.n_max > sp.len() {
            return Err(invalid(format!("attractor.n_max = {} violates 1 <= n_max <= mode count", a.n_max)));
        }
    }
    if a.ortho_every == 0 {
        return Err(invalid("attractor.ortho_every violates ortho_every >= 1"));
    }
    if !(a.t_span > 0.0 && a.t_span.is_finite()) || !(a.absorbing_time >= 0.0 && a.absorbing_time.is_finite()) {
        return Err(invalid("attractor.t_span > 0 and attractor.absorbing_time >= 0 are required"));
    }
    if !(0.0..1.0).contains(&a.fit_from) || !(a.mix >= 0.0 && a.mix.is_finite()) {
        return Err(invalid("attractor.fit_from ∈ [0,1) and attractor.mix >= 0 are required"));
    }

    let c = &file.convergence;
    if c.eps.iter().any(|e| !(*e >= 0.0 && *e < 1.0)) {
        return Err(invalid("convergence.eps entries violate ε ∈ [0,1)"));
    }
    if c.resolutions.iter().any(|&n| n < 4) {
        return Err(invalid("convergence.resolutions entries violate n >= 4"));
    }
    for (what, spec) in [("initial", &file.initial), ("forcing", &file.forcing)] {
        if let FieldSpec::Random { band, .. } = spec {
            if command == Command::Convergence && c.resolutions.iter().any(|n| n < band) {
                return Err(invalid(format!("convergence.resolutions must all resolve the {what} band {band}")));
            }
        }
    }

    Ok(RunConfig {
        command,
        file,
        domain,
        spectrum,
        sqg,
        suite,
    })
}
