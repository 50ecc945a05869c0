//! Coefficient-space and grid-space scalar fields.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Zip};

use crate::error::{out_of_range, Result, SpectralError};
use crate::spectrum::Spectrum;
use crate::transform::Parity;

/// Scalar field as sine coefficients `h_jk = (h, w_jk)`, indexed `[j-1, k-1]`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    spectrum: Arc<Spectrum>,
    coeffs: Array2<f64>,
}

/// Nodal values on the `(nx+2) x (ny+2)` collocation grid, boundary included.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    spectrum: Arc<Spectrum>,
    values: Array2<f64>,
}

/// Two nodal components on the collocation grid. Components generally do not
/// vanish on the boundary (e.g. gradients).
#[derive(Debug, Clone)]
pub struct PhysicalVectorField {
    spectrum: Arc<Spectrum>,
    x: Array2<f64>,
    y: Array2<f64>,
}

fn check_shape(expected: (usize, usize), got: &[usize]) -> Result<()> {
    if got != [expected.0, expected.1] {
        return Err(SpectralError::Shape {
            expected,
            got: (got[0], got[1]),
        });
    }
    Ok(())
}

fn check_finite(a: &Array2<f64>, what: &'static str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SpectralError::NonFinite(what))
    }
}

/// Trapezoid integral of nodal data.
fn trapezoid_integral(spectrum: &Spectrum, values: ArrayView2<'_, f64>) -> f64 {
    let wx = spectrum.trapezoid_x();
    let wy = spectrum.trapezoid_y();
    values
        .outer_iter()
        .zip(&wx)
        .map(|(row, &a)| a * row.iter().zip(&wy).map(|(v, b)| v * b).sum::<f64>())
        .sum()
}

fn lp_of(spectrum: &Spectrum, abs_values: ArrayView2<'_, f64>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(out_of_range("p", p, "p >= 1 or p = infinity"));
    }
    if p.is_infinite() {
        return Ok(abs_values.iter().fold(0.0, |m, &v| m.max(v)));
    }
    let powered = abs_values.mapv(|v| v.powf(p));
    Ok(trapezoid_integral(spectrum, powered.view()).powf(1.0 / p))
}

impl SpectralField {
    pub fn new(spectrum: Arc<Spectrum>, coeffs: Array2<f64>) -> Result<Self> {
        check_shape(spectrum.shape(), coeffs.shape())?;
        check_finite(&coeffs, "spectral coefficients")?;
        Ok(Self { spectrum, coeffs })
    }

    /// Constructor for callers that already guarantee shape and finiteness.
    pub(crate) fn from_parts(spectrum: Arc<Spectrum>, coeffs: Array2<f64>) -> Self {
        debug_assert_eq!(coeffs.dim(), spectrum.shape());
        Self { spectrum, coeffs }
    }

    pub fn zeros(spectrum: Arc<Spectrum>) -> Self {
        let coeffs = Array2::zeros(spectrum.shape());
        Self { spectrum, coeffs }
    }

    /// `amplitude * w_jk` for 1-based indices.
    pub fn single_mode(spectrum: Arc<Spectrum>, j: usize, k: usize, amplitude: f64) -> Result<Self> {
        if j == 0 || k == 0 || j > spectrum.nx() || k > spectrum.ny() {
            return Err(out_of_range("mode index", (j.max(k)) as f64, "1 <= j <= nx, 1 <= k <= ny"));
        }
        let mut f = Self::zeros(spectrum);
        f.coeffs[[j - 1, k - 1]] = amplitude;
        Ok(f)
    }

    /// Builds coefficients from a function of `(j, k, lambda_jk)`.
    pub fn from_mode_fn(spectrum: Arc<Spectrum>, mut f: impl FnMut(usize, usize, f64) -> f64) -> Result<Self> {
        let coeffs = Array2::from_shape_fn(spectrum.shape(), |(a, b)| {
            f(a + 1, b + 1, spectrum.eigenvalue(a + 1, b + 1))
        });
        Self::new(spectrum, coeffs)
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn coeffs(&self) -> ArrayView2<'_, f64> {
        self.coeffs.view()
    }

    pub fn coeffs_mut(&mut self) -> ArrayViewMut2<'_, f64> {
        self.coeffs.view_mut()
    }

    pub fn into_coeffs(self) -> Array2<f64> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        self.coeffs[[j - 1, k - 1]]
    }

    fn same_spectrum(&self, other: &SpectralField) -> Result<()> {
        if self.spectrum.compatible(&other.spectrum) {
            Ok(())
        } else {
            Err(SpectralError::SpectrumMismatch)
        }
    }

    /// Nodal values `sum h_jk w_jk(x_i, y_l)`; boundary nodes are exactly zero.
    pub fn to_physical(&self) -> PhysicalField {
        let values = self.spectrum.synthesize(self.coeffs.view(), Parity::Sine, Parity::Sine);
        PhysicalField {
            spectrum: Arc::clone(&self.spectrum),
            values,
        }
    }

    /// Nodal gradient. `d/dx` turns the x-sine factor into a cosine, so the
    /// components are cosine-sine and sine-cosine series respectively.
    pub fn gradient(&self) -> PhysicalVectorField {
        let sp = &self.spectrum;
        let dx = Array2::from_shape_fn(sp.shape(), |(a, b)| self.coeffs[[a, b]] * sp.wavenumber_x(a + 1));
        let dy = Array2::from_shape_fn(sp.shape(), |(a, b)| self.coeffs[[a, b]] * sp.wavenumber_y(b + 1));
        PhysicalVectorField {
            spectrum: Arc::clone(sp),
            x: sp.synthesize(dx.view(), Parity::Cosine, Parity::Sine),
            y: sp.synthesize(dy.view(), Parity::Sine, Parity::Cosine),
        }
    }

    /// `(sum lambda_jk^sigma h_jk^2)^(1/2)`, the norm of `Lambda^sigma h` in L^2.
    pub fn sobolev_norm(&self, sigma: f64) -> f64 {
        self.sobolev_inner(sigma, self).unwrap_or(f64::NAN).max(0.0).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `(Lambda^sigma self, Lambda^sigma other)`.
    pub fn sobolev_inner(&self, sigma: f64, other: &SpectralField) -> Result<f64> {
        self.same_spectrum(other)?;
        let ev = self.spectrum.eigenvalues();
        let mut acc = 0.0;
        Zip::from(&self.coeffs).and(&other.coeffs).and(ev).for_each(|a, b, l| {
            acc += l.powf(sigma) * a * b;
        });
        Ok(acc)
    }

    /// L^2 inner product (exact, by orthonormality).
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.same_spectrum(other)?;
        Ok(Zip::from(&self.coeffs).and(&other.coeffs).fold(0.0, |acc, a, b| acc + a * b))
    }

    /// Applies a diagonal multiplier `m(lambda_jk)` mode by mode.
    pub fn map_eigen(&self, m: impl Fn(f64) -> f64) -> SpectralField {
        let ev = self.spectrum.eigenvalues();
        let mut coeffs = self.coeffs.clone();
        Zip::from(&mut coeffs).and(ev).for_each(|c, &l| *c *= m(l));
        Self::from_parts(Arc::clone(&self.spectrum), coeffs)
    }

    /// Multiplies by a precomputed per-mode table.
    pub fn apply_table(&self, table: ArrayView2<'_, f64>) -> SpectralField {
        let mut coeffs = self.coeffs.clone();
        coeffs *= &table;
        Self::from_parts(Arc::clone(&self.spectrum), coeffs)
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        Self::from_parts(Arc::clone(&self.spectrum), &self.coeffs * a)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<SpectralField> {
        self.same_spectrum(other)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.scaled_add(a, &other.coeffs);
        Ok(Self::from_parts(Arc::clone(&self.spectrum), coeffs))
    }

    /// Zeroes every mode with `j > kx` or `k > ky`.
    pub fn truncate(&mut self, kx: usize, ky: usize) {
        for ((a, b), c) in self.coeffs.indexed_iter_mut() {
            if a + 1 > kx || b + 1 > ky {
                *c = 0.0;
            }
        }
    }

    /// 2/3-rule truncation.
    pub fn dealias(&mut self) {
        let (kx, ky) = self.spectrum.dealias_cutoff();
        self.truncate(kx, ky);
    }

    /// Copies coefficients onto another spectrum over the same domain,
    /// zero-padding or truncating as needed.
    pub fn resample(&self, target: &Arc<Spectrum>) -> Result<SpectralField> {
        if target.domain() != self.spectrum.domain() {
            return Err(SpectralError::SpectrumMismatch);
        }
        let mut coeffs = Array2::zeros(target.shape());
        let nx = target.nx().min(self.spectrum.nx());
        let ny = target.ny().min(self.spectrum.ny());
        for a in 0..nx {
            for b in 0..ny {
                coeffs[[a, b]] = self.coeffs[[a, b]];
            }
        }
        Ok(Self::from_parts(Arc::clone(target), coeffs))
    }

    /// Exact `int_Omega h dx` from the mode integrals of the sine basis.
    pub fn integral(&self) -> f64 {
        let sp = &self.spectrum;
        let norm = sp.normalization();
        let mut acc = 0.0;
        for ((a, b), c) in self.coeffs.indexed_iter() {
            let (j, k) = (a + 1, b + 1);
            if j % 2 == 1 && k % 2 == 1 {
                acc += c * norm * (2.0 / sp.wavenumber_x(j)) * (2.0 / sp.wavenumber_y(k));
            }
        }
        acc
    }

    /// Evaluates the series at an arbitrary point.
    pub fn eval_at(&self, x: f64, y: f64) -> f64 {
        let sp = &self.spectrum;
        let sx: Vec<f64> = (1..=sp.nx()).map(|j| (sp.wavenumber_x(j) * x).sin()).collect();
        let sy: Vec<f64> = (1..=sp.ny()).map(|k| (sp.wavenumber_y(k) * y).sin()).collect();
        let mut acc = 0.0;
        for ((a, b), c) in self.coeffs.indexed_iter() {
            acc += c * sx[a] * sy[b];
        }
        acc * sp.normalization()
    }

    /// Gradient of the series at an arbitrary point.
    pub fn gradient_at(&self, x: f64, y: f64) -> (f64, f64) {
        let sp = &self.spectrum;
        let (mut gx, mut gy) = (0.0, 0.0);
        let ax: Vec<(f64, f64)> = (1..=sp.nx())
            .map(|j| {
                let kx = sp.wavenumber_x(j);
                ((kx * x).sin(), kx * (kx * x).cos())
            })
            .collect();
        let ay: Vec<(f64, f64)> = (1..=sp.ny())
            .map(|k| {
                let ky = sp.wavenumber_y(k);
                ((ky * y).sin(), ky * (ky * y).cos())
            })
            .collect();
        for ((a, b), c) in self.coeffs.indexed_iter() {
            gx += c * ax[a].1 * ay[b].0;
            gy += c * ax[a].0 * ay[b].1;
        }
        (gx * sp.normalization(), gy * sp.normalization())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs).expect("adding fields on different spectra")
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs).expect("subtracting fields on different spectra")
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl PhysicalField {
    pub fn new(spectrum: Arc<Spectrum>, values: Array2<f64>) -> Result<Self> {
        check_shape(spectrum.grid_shape(), values.shape())?;
        check_finite(&values, "nodal values")?;
        Ok(Self { spectrum, values })
    }

    pub fn zeros(spectrum: Arc<Spectrum>) -> Self {
        let values = Array2::zeros(spectrum.grid_shape());
        Self { spectrum, values }
    }

    /// Samples `f(x, y)` at every node. Boundary nodes are forced to zero.
    pub fn from_fn(spectrum: Arc<Spectrum>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (gx, gy) = spectrum.grid_shape();
        let values = Array2::from_shape_fn((gx, gy), |(i, l)| {
            if i == 0 || l == 0 || i == gx - 1 || l == gy - 1 {
                0.0
            } else {
                f(spectrum.node_x(i), spectrum.node_y(l))
            }
        });
        Self::new(spectrum, values)
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    /// Trapezoid projection onto the sine modes. Only interior nodes are read,
    /// so the Dirichlet condition is enforced rather than checked.
    pub fn to_spectral(&self) -> SpectralField {
        let coeffs = self.spectrum.analyze(self.values.view());
        SpectralField::from_parts(Arc::clone(&self.spectrum), coeffs)
    }

    /// Composite trapezoid `L^p` norm; `p = f64::INFINITY` gives the grid maximum.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of(&self.spectrum, self.values.mapv(f64::abs).view(), p)
    }

    pub fn integral(&self) -> f64 {
        trapezoid_integral(&self.spectrum, self.values.view())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PhysicalField {
        PhysicalField {
            spectrum: Arc::clone(&self.spectrum),
            values: self.values.mapv(f),
        }
    }

    pub fn zip_with(&self, other: &PhysicalField, f: impl Fn(f64, f64) -> f64) -> Result<PhysicalField> {
        if !self.spectrum.compatible(&other.spectrum) {
            return Err(SpectralError::SpectrumMismatch);
        }
        let values = Zip::from(&self.values).and(&other.values).map_collect(|&a, &b| f(a, b));
        Ok(PhysicalField {
            spectrum: Arc::clone(&self.spectrum),
            values,
        })
    }

    /// Trapezoid integral of the pointwise product.
    pub fn inner(&self, other: &PhysicalField) -> Result<f64> {
        Ok(self.zip_with(other, |a, b| a * b)?.integral())
    }

    pub fn boundary_max_abs(&self) -> f64 {
        let (gx, gy) = self.values.dim();
        let mut m: f64 = 0.0;
        for i in 0..gx {
            m = m.max(self.values[[i, 0]].abs()).max(self.values[[i, gy - 1]].abs());
        }
        for l in 0..gy {
            m = m.max(self.values[[0, l]].abs()).max(self.values[[gx - 1, l]].abs());
        }
        m
    }
}

impl PhysicalVectorField {
    pub(crate) fn from_parts(spectrum: Arc<Spectrum>, x: Array2<f64>, y: Array2<f64>) -> Self {
        Self { spectrum, x, y }
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView2<'_, f64> {
        self.y.view()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> Array2<f64> {
        Zip::from(&self.x).and(&self.y).map_collect(|a, b| a.hypot(*b))
    }

    pub fn max_magnitude(&self) -> f64 {
        Zip::from(&self.x).and(&self.y).fold(0.0, |m: f64, a, b| m.max(a.hypot(*b)))
    }

    /// `L^p` norm of the magnitude (trapezoid).
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of(&self.spectrum, self.magnitude().view(), p)
    }

    /// Trapezoid `(self, other)` in `L^2`.
    pub fn inner(&self, other: &PhysicalVectorField) -> Result<f64> {
        if !self.spectrum.compatible(&other.spectrum) {
            return Err(SpectralError::SpectrumMismatch);
        }
        let dot = Zip::from(&self.x)
            .and(&self.y)
            .and(&other.x)
            .and(&other.y)
            .map_collect(|a, b, c, d| a * c + b * d);
        Ok(trapezoid_integral(&self.spectrum, dot.view()))
    }

    /// Nodal `self . grad` for a gradient field.
    pub fn dot(&self, other: &PhysicalVectorField) -> Result<PhysicalField> {
        if !self.spectrum.compatible(&other.spectrum) {
            return Err(SpectralError::SpectrumMismatch);
        }
        let values = Zip::from(&self.x)
            .and(&self.y)
            .and(&other.x)
            .and(&other.y)
            .map_collect(|a, b, c, d| a * c + b * d);
        Ok(PhysicalField {
            spectrum: Arc::clone(&self.spectrum),
            values,
        })
    }
}
