//! Configuration, dispatch and artifact emission for the `fracsqg` binary.

pub mod config;
pub mod dispatch;
pub mod error;
pub mod manifest;

pub use config::{parse_config, Command, ConfigFile, FieldSpec, RunConfig};
pub use dispatch::{dispatch, execute, resolution_study, Outcome};
pub use error::{CliError, Result};
pub use manifest::{Artifact, ArtifactWriter, Manifest, MANIFEST};
