//! Forced subcritical SQG `q_t + u.grad q + Lambda^alpha q = f`, `u = R^perp q`,
//! and its regularization with `-eps Delta` and mollified data, integrated
//! pseudo-spectrally in the Dirichlet sine basis.

pub mod checkpoint;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod integrator;
pub mod run;
pub mod study;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use config::{Dealias, SQGConfig};
pub use diagnostics::{energy_balance_residual, write_csv, DiagnosticRecord};
pub use error::{Result, SqgError};
pub use integrator::{nonlinear_term, nonlinear_term_with, step, Integrator, SQGState};
pub use run::{run, run_from, RunOutput};
pub use study::{eps_convergence_study, EpsRow, EpsStudy};
