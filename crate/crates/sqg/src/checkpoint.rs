//! Binary checkpoints: `FSQG`, format version, grid, domain, `alpha`, `eps`,
//! `t`, then the coefficients in row-major mode order, all little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use fracsqg_core::{RectDomain, SpectralField, Spectrum};
use ndarray::Array2;

use crate::config::SQGConfig;
use crate::error::{Result, SqgError};
use crate::integrator::SQGState;

const MAGIC: &[u8; 4] = b"FSQG";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub nx: u64,
    pub ny: u64,
    pub lx: f64,
    pub ly: f64,
    pub alpha: f64,
    pub eps: f64,
    pub t: f64,
    pub coeffs: Array2<f64>,
}

impl Checkpoint {
    pub fn from_state(cfg: &SQGConfig, state: &SQGState) -> Self {
        let sp = state.q.spectrum();
        Self {
            nx: sp.nx() as u64,
            ny: sp.ny() as u64,
            lx: sp.domain().lx(),
            ly: sp.domain().ly(),
            alpha: cfg.alpha,
            eps: cfg.eps,
            t: state.t,
            coeffs: state.q.coeffs().to_owned(),
        }
    }

    /// Rebuilds the state for `cfg`, which must match the stored grid and
    /// parameters. The step counter is recovered as `round(t / dt)`.
    pub fn into_state(self, cfg: &SQGConfig) -> Result<SQGState> {
        let sp = cfg.spectrum();
        let same_grid = sp.nx() as u64 == self.nx
            && sp.ny() as u64 == self.ny
            && sp.domain().lx() == self.lx
            && sp.domain().ly() == self.ly;
        if !same_grid || cfg.alpha != self.alpha || cfg.eps != self.eps {
            return Err(SqgError::Checkpoint("checkpoint does not match the configuration".into()));
        }
        let steps = (self.t / cfg.dt).round() as u64;
        let q = SpectralField::new(Arc::clone(sp), self.coeffs)?;
        Ok(SQGState::new(q, self.t, steps))
    }

    /// A spectrum for the stored grid, for callers without a configuration.
    pub fn spectrum(&self) -> Result<Arc<Spectrum>> {
        Ok(Spectrum::new(RectDomain::new(self.lx, self.ly)?, self.nx as usize, self.ny as usize)?)
    }
}

pub fn write_checkpoint(path: &Path, c: &Checkpoint) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&c.nx.to_le_bytes())?;
    w.write_all(&c.ny.to_le_bytes())?;
    for v in [c.lx, c.ly, c.alpha, c.eps, c.t] {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in c.coeffs.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SqgError::Checkpoint("bad magic bytes".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(SqgError::Checkpoint(format!("unsupported format version {version}")));
    }
    let nx = read_u64(&mut r)?;
    let ny = read_u64(&mut r)?;
    if nx == 0 || ny == 0 || nx.saturating_mul(ny) > (1 << 28) {
        return Err(SqgError::Checkpoint(format!("implausible grid {nx} x {ny}")));
    }
    let (lx, ly, alpha, eps, t) = (read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?);
    let mut vals = Vec::with_capacity((nx * ny) as usize);
    for _ in 0..nx * ny {
        vals.push(read_f64(&mut r)?);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(SqgError::Checkpoint(format!("{} trailing bytes", rest.len())));
    }
    let coeffs = Array2::from_shape_vec((nx as usize, ny as usize), vals).map_err(|e| SqgError::Checkpoint(e.to_string()))?;
    Ok(Checkpoint {
        nx,
        ny,
        lx,
        ly,
        alpha,
        eps,
        t,
        coeffs,
    })
}
