//! Dirichlet eigenbasis of the rectangle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2};

use crate::domain::RectDomain;
use crate::error::{Result, SpectralError};
use crate::transform::{Parity, Trig2d};

/// Truncated Dirichlet spectrum: modes `(j, k)` with `1 <= j <= nx`, `1 <= k <= ny`,
/// eigenfunctions `w_jk = 2/sqrt(lx ly) sin(j pi x/lx) sin(k pi y/ly)` and
/// eigenvalues `lambda_jk = pi^2 (j^2/lx^2 + k^2/ly^2)`.
///
/// The collocation grid has `(nx+2) x (ny+2)` nodes including the boundary,
/// spacing `lx/(nx+1)` and `ly/(ny+1)`, on which the `nx x ny` sine modes are
/// exactly orthogonal.
pub struct Spectrum {
    domain: RectDomain,
    nx: usize,
    ny: usize,
    eigenvalues: Array2<f64>,
    lambda_min: f64,
    sorted: Vec<(usize, usize)>,
    trig: Trig2d,
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectrum")
            .field("domain", &self.domain)
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .finish()
    }
}

impl Spectrum {
    pub fn new(domain: RectDomain, nx: usize, ny: usize) -> Result<Arc<Self>> {
        if nx == 0 || ny == 0 {
            return Err(SpectralError::ZeroModes { nx, ny });
        }
        let eigenvalues = Array2::from_shape_fn((nx, ny), |(a, b)| {
            eigenvalue_formula(&domain, a + 1, b + 1)
        });
        let mut sorted: Vec<(usize, usize)> = (1..=nx)
            .flat_map(|j| (1..=ny).map(move |k| (j, k)))
            .collect();
        sorted.sort_by(|&(j1, k1), &(j2, k2)| {
            eigenvalues[[j1 - 1, k1 - 1]]
                .total_cmp(&eigenvalues[[j2 - 1, k2 - 1]])
                .then((j1, k1).cmp(&(j2, k2)))
        });
        let lambda_min = eigenvalues[[0, 0]];
        Ok(Arc::new(Self {
            domain,
            nx,
            ny,
            eigenvalues,
            lambda_min,
            sorted,
            trig: Trig2d::new(nx, ny),
        }))
    }

    pub fn unit_square(n: usize) -> Result<Arc<Self>> {
        Self::new(RectDomain::unit_square(), n, n)
    }

    pub fn domain(&self) -> &RectDomain {
        &self.domain
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `lambda_jk` for 1-based mode indices.
    pub fn eigenvalue(&self, j: usize, k: usize) -> f64 {
        self.eigenvalues[[j - 1, k - 1]]
    }

    /// Eigenvalue table indexed `[j-1, k-1]`.
    pub fn eigenvalues(&self) -> ArrayView2<'_, f64> {
        self.eigenvalues.view()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// Modes ordered by increasing eigenvalue (ties broken by `(j, k)`).
    pub fn sorted_modes(&self) -> &[(usize, usize)] {
        &self.sorted
    }

    pub fn wavenumber_x(&self, j: usize) -> f64 {
        j as f64 * PI / self.domain.lx()
    }

    pub fn wavenumber_y(&self, k: usize) -> f64 {
        k as f64 * PI / self.domain.ly()
    }

    /// `2/sqrt(lx ly)`.
    pub fn normalization(&self) -> f64 {
        2.0 / self.domain.area().sqrt()
    }

    pub fn eigenfunction(&self, j: usize, k: usize, x: f64, y: f64) -> f64 {
        self.normalization() * (self.wavenumber_x(j) * x).sin() * (self.wavenumber_y(k) * y).sin()
    }

    /// Grid shape including boundary nodes.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.nx + 2, self.ny + 2)
    }

    pub fn hx(&self) -> f64 {
        self.domain.lx() / (self.nx + 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.ly() / (self.ny + 1) as f64
    }

    pub fn node_x(&self, i: usize) -> f64 {
        if i == self.nx + 1 {
            self.domain.lx()
        } else {
            i as f64 * self.hx()
        }
    }

    pub fn node_y(&self, l: usize) -> f64 {
        if l == self.ny + 1 {
            self.domain.ly()
        } else {
            l as f64 * self.hy()
        }
    }

    /// Trapezoid weights along x (half weight on the two boundary nodes).
    pub fn trapezoid_x(&self) -> Vec<f64> {
        trapezoid(self.nx + 2, self.hx())
    }

    pub fn trapezoid_y(&self) -> Vec<f64> {
        trapezoid(self.ny + 2, self.hy())
    }

    /// Highest retained mode per axis under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> (usize, usize) {
        (2 * self.nx / 3, 2 * self.ny / 3)
    }

    /// Two spectra describe the same discretization.
    pub fn compatible(&self, other: &Spectrum) -> bool {
        std::ptr::eq(self, other) || (self.domain == other.domain && self.nx == other.nx && self.ny == other.ny)
    }

    /// Nodal values of `sum c_jk * norm * phi_j(x) phi_k(y)` with the given
    /// per-axis parities.
    pub(crate) fn synthesize(&self, coeffs: ArrayView2<'_, f64>, px: Parity, py: Parity) -> Array2<f64> {
        let mut out = self.trig.synthesize(coeffs, px, py);
        out *= self.normalization();
        out
    }

    /// Inverse of [`Self::synthesize`] for sine-sine data: the trapezoid
    /// projection `(f, w_jk)` evaluated on the grid.
    pub(crate) fn analyze(&self, nodal: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut out = self.trig.sine_analysis(nodal);
        let scale = 2.0 * self.domain.area().sqrt() / ((self.nx + 1) * (self.ny + 1)) as f64;
        out *= scale;
        out
    }
}

fn eigenvalue_formula(domain: &RectDomain, j: usize, k: usize) -> f64 {
    let a = j as f64 / domain.lx();
    let b = k as f64 / domain.ly();
    PI * PI * (a * a + b * b)
}

fn trapezoid(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}
