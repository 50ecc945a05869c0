//! Per-run manifest: artifacts with completion flags, status and timestamps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Command;
use crate::error::Result;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub file: String,
    pub complete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: Command,
    pub seed: u64,
    pub threads: Option<usize>,
    pub status: String,
    pub failures: Option<usize>,
    pub error: Option<String>,
    pub artifacts: Vec<Artifact>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

pub(crate) fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Writes artifacts into one directory, recording each before it is written.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    pub(crate) artifacts: Vec<Artifact>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Registers `name` as incomplete, returning its path; call [`Self::done`] after writing.
    pub fn begin(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(Artifact {
            file: name.to_string(),
            complete: false,
        });
        self.path(name)
    }

    pub fn done(&mut self, name: &str) {
        if let Some(a) = self.artifacts.iter_mut().rev().find(|a| a.file == name) {
            a.complete = true;
        }
    }

    pub fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let path = self.begin(name);
        let mut w = BufWriter::new(File::create(path)?);
        body(&mut w)?;
        w.flush()?;
        self.done(name);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
