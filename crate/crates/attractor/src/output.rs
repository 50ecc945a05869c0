//! CSV and JSON emission.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::volume::VolumeTrace;

/// Long-format CSV of every trace.
pub fn write_volume_csv<W: Write>(mut out: W, traces: &[VolumeTrace]) -> Result<()> {
    writeln!(out, "{}", VolumeTrace::csv_header())?;
    for t in traces {
        for row in t.csv_rows() {
            writeln!(out, "{row}")?;
        }
    }
    Ok(())
}

/// Pretty JSON; floats use the shortest representation that round-trips.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
