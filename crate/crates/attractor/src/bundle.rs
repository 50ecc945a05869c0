//! Tangent bundles and Gram-Schmidt in the D(Lambda) inner product.

use std::sync::Arc;

use fracsqg_core::{SpectralField, Spectrum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{config, AttractorError, Result};

/// Rank-deficiency threshold relative to the incoming tangent norm.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// `(Lambda a, Lambda b)_{L2}`.
pub fn dlambda_inner(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    Ok(a.sobolev_inner(1.0, b)?)
}

pub fn dlambda_norm(a: &SpectralField) -> f64 {
    a.sobolev_norm(1.0)
}

#[derive(Debug, Clone)]
pub struct TangentBundle {
    fields: Vec<SpectralField>,
    ortho_every: usize,
}

impl TangentBundle {
    pub fn new(fields: Vec<SpectralField>, ortho_every: usize) -> Result<Self> {
        let first = fields.first().ok_or_else(|| config("empty tangent bundle"))?;
        if fields.iter().any(|f| !f.spectrum().compatible(first.spectrum())) {
            return Err(config("tangent fields live on different grids"));
        }
        if ortho_every == 0 {
            return Err(config("orthonormalization interval must be at least one step"));
        }
        Ok(Self { fields, ortho_every })
    }

    /// The `n` lowest eigenmodes, normalized in D(Lambda), optionally mixed with
    /// seeded Gaussian noise of relative size `mix` on the same modes.
    pub fn eigenmodes(sp: &Arc<Spectrum>, n: usize, mix: f64, seed: u64, ortho_every: usize) -> Result<Self> {
        let modes = sp.sorted_modes();
        if n == 0 || n > modes.len() {
            return Err(config(format!("bundle size {n} outside 1..={}", modes.len())));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fields = (0..n)
            .map(|i| {
                let mut f = SpectralField::zeros(Arc::clone(sp));
                for (m, &(j, k)) in modes[..n].iter().enumerate() {
                    let noise: f64 = StandardNormal.sample(&mut rng);
                    let c = if m == i { 1.0 } else { 0.0 } + mix * noise;
                    f.coeffs_mut()[[j - 1, k - 1]] = c / sp.eigenvalue(j, k).sqrt();
                }
                f
            })
            .collect();
        Self::new(fields, ortho_every)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    pub fn ortho_every(&self) -> usize {
        self.ortho_every
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        self.fields[0].spectrum()
    }

    pub(crate) fn with_fields(&self, fields: Vec<SpectralField>) -> Self {
        Self {
            fields,
            ortho_every: self.ortho_every,
        }
    }

    pub fn gram(&self) -> Result<DMatrix<f64>> {
        gram(&self.fields)
    }

    /// `max |G - I|` over the D(Lambda) Gram matrix.
    pub fn orthonormality_defect(&self) -> Result<f64> {
        let g = self.gram()?;
        Ok((g - DMatrix::identity(self.len(), self.len())).amax())
    }
}

pub(crate) fn gram(fields: &[SpectralField]) -> Result<DMatrix<f64>> {
    let n = fields.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = dlambda_inner(&fields[i], &fields[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Modified Gram-Schmidt (two passes) in D(Lambda). Returns the orthonormal
/// bundle and the log of each diagonal normalizer; the prefix sums are the
/// log-volume increments of the leading sub-bundles.
pub fn orthonormalize(bundle: &TangentBundle) -> Result<(TangentBundle, Vec<f64>)> {
    let mut out: Vec<SpectralField> = Vec::with_capacity(bundle.len());
    let mut logs = Vec::with_capacity(bundle.len());
    for (i, xi) in bundle.fields.iter().enumerate() {
        let scale = dlambda_norm(xi);
        let mut v = xi.clone();
        let mut log_r = 0.0;
        for _ in 0..2 {
            for phi in &out {
                let c = dlambda_inner(&v, phi)?;
                v = v.axpy(-c, phi)?;
            }
            let r = dlambda_norm(&v);
            if !(r > DEGENERACY_TOL * scale) {
                return Err(AttractorError::Degenerate {
                    index: i,
                    normalizer: r,
                    scale,
                });
            }
            v = v.scaled(1.0 / r);
            log_r += r.ln();
        }
        out.push(v);
        logs.push(log_r);
    }
    Ok((bundle.with_fields(out), logs))
}
