//! Time loop with sampled diagnostics.

use std::path::Path;

use fracsqg_core::SpectralField;

use crate::checkpoint::{write_checkpoint, Checkpoint};
use crate::config::SQGConfig;
use crate::diagnostics::{interval_residual, DiagnosticRecord};
use crate::error::{Result, SqgError};
use crate::integrator::{Integrator, SQGState};

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<DiagnosticRecord>,
    pub state: SQGState,
}

/// Integrates from `q0` (mollified when `eps > 0`) to `t_final`, recording
/// every `sample_every` steps and at the end. Writes a checkpoint of the final
/// state when a path is given.
pub fn run(cfg: &SQGConfig, q0: &SpectralField, sample_every: u64, checkpoint: Option<&Path>) -> Result<RunOutput> {
    let integ = Integrator::new(cfg)?;
    let state = integ.initial_state(q0)?;
    run_from(&integ, state, sample_every, checkpoint)
}

/// Continues an existing state; the step counter fixes the sampling phase, so
/// a resumed run records the same samples as an uninterrupted one.
pub fn run_from(integ: &Integrator, mut state: SQGState, sample_every: u64, checkpoint: Option<&Path>) -> Result<RunOutput> {
    if sample_every == 0 {
        return Err(SqgError::Config("sample_every must be at least 1".into()));
    }
    let total = integ.config().total_steps();
    let mut records = vec![DiagnosticRecord::measure(integ, &state)?];
    while state.steps < total {
        integ.step(&mut state)?;
        if state.steps.is_multiple_of(sample_every) || state.steps == total {
            let mut rec = DiagnosticRecord::measure(integ, &state)?;
            if let Some(prev) = records.last() {
                rec.energy_residual = Some(interval_residual(prev, &rec));
            }
            if !rec.is_finite() {
                return Err(SqgError::Divergence { t: state.t });
            }
            records.push(rec);
        }
    }
    if let Some(path) = checkpoint {
        write_checkpoint(path, &Checkpoint::from_state(integ.config(), &state))?;
    }
    Ok(RunOutput { records, state })
}
