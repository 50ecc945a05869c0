//! Long-time diagnostics for forced subcritical SQG: absorbing balls,
//! Lipschitz growth of the solution map, tangent volume decay and the
//! resulting dimension estimate.

pub mod absorbing;
pub mod bundle;
pub mod dimension;
pub mod error;
pub mod lipschitz;
pub mod output;
pub mod tangent;
pub mod trace;
pub mod volume;

pub use absorbing::{absorbing_ball_experiment, BALL_MARGIN, attractor_proxy, norm_history, AbsorbingReport, BallTrajectory};
pub use bundle::{dlambda_inner, dlambda_norm, orthonormalize, TangentBundle};
pub use dimension::{dimension_estimate, growth_exponent, DimensionReport};
pub use error::{AttractorError, Result};
pub use lipschitz::{lipschitz_estimate, LipschitzReport};
pub use output::{write_json, write_volume_csv};
pub use tangent::{apply_linearized, linear_advection, linearized_step, BaseFlow};
pub use trace::{nested_traces, trace_aqn};
pub use volume::{fit_slope, volume_decay_from, volume_decay_run, VolumeOptions, VolumeTrace};
