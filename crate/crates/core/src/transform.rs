//! Type-I sine and cosine transforms on the closed uniform grid, built on an
//! odd/even extension of length `2(n+1)` fed through a complex FFT.
//!
//! For `n` modes the grid has nodes `i = 0..=n+1`; node `i` sits at
//! `i * L / (n+1)`. Mode `j` contributes `sin(pi i j / (n+1))` (or the cosine
//! counterpart) at node `i`.

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2, Axis, Zip};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Work below this many lane elements runs serially.
const PAR_THRESHOLD: usize = 16 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Sine,
    Cosine,
}

#[derive(Clone)]
pub(crate) struct Trig1d {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Trig1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trig1d").field("n", &self.n).finish()
    }
}

impl Trig1d {
    pub(crate) fn new(n: usize, planner: &mut FftPlanner<f64>) -> Self {
        let fft = planner.plan_fft_forward(2 * (n + 1));
        Self { n, fft }
    }

    fn run(&self, buf: &mut [Complex64]) {
        let mut scratch = vec![Complex64::default(); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(buf, &mut scratch);
    }

    /// `out[i] = sum_j c[j-1] * sin/cos(pi i j/(n+1))`, `i = 0..=n+1`.
    pub(crate) fn synthesize(&self, parity: Parity, coeffs: &[f64], out: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(coeffs.len(), n);
        debug_assert_eq!(out.len(), n + 2);
        let len = 2 * (n + 1);
        let mut buf = vec![Complex64::default(); len];
        match parity {
            Parity::Sine => {
                for (j, &c) in coeffs.iter().enumerate() {
                    buf[j + 1].re = c;
                    buf[len - j - 1].re = -c;
                }
                self.run(&mut buf);
                out[0] = 0.0;
                out[n + 1] = 0.0;
                for i in 1..=n {
                    out[i] = -0.5 * buf[i].im;
                }
            }
            Parity::Cosine => {
                for (j, &c) in coeffs.iter().enumerate() {
                    buf[j + 1].re = c;
                    buf[len - j - 1].re = c;
                }
                self.run(&mut buf);
                for (i, o) in out.iter_mut().enumerate() {
                    *o = 0.5 * buf[i].re;
                }
            }
        }
    }

    /// `out[j-1] = sum_{i=1..n} v[i] sin(pi i j/(n+1))`; boundary entries of `v` are ignored.
    pub(crate) fn sine_analysis(&self, nodal: &[f64], out: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(nodal.len(), n + 2);
        debug_assert_eq!(out.len(), n);
        let len = 2 * (n + 1);
        let mut buf = vec![Complex64::default(); len];
        for i in 1..=n {
            buf[i].re = nodal[i];
            buf[len - i].re = -nodal[i];
        }
        self.run(&mut buf);
        for (j, o) in out.iter_mut().enumerate() {
            *o = -0.5 * buf[j + 1].im;
        }
    }
}

/// Maps every lane of `input` along `axis` through `f`, producing lanes of
/// length `out_len`.
fn map_lanes<F>(input: ArrayView2<'_, f64>, axis: Axis, out_len: usize, f: F) -> Array2<f64>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut shape = [input.nrows(), input.ncols()];
    shape[axis.index()] = out_len;
    let mut out = Array2::<f64>::zeros(shape);
    let work = input.len().max(out.len());
    let body = |lane: ndarray::ArrayView1<'_, f64>, mut o: ndarray::ArrayViewMut1<'_, f64>| {
        let src: Vec<f64> = lane.iter().copied().collect();
        let mut dst = vec![0.0; out_len];
        f(&src, &mut dst);
        for (slot, v) in o.iter_mut().zip(dst) {
            *slot = v;
        }
    };
    let zip = Zip::from(input.lanes(axis)).and(out.lanes_mut(axis));
    if work >= PAR_THRESHOLD {
        zip.par_for_each(body);
    } else {
        zip.for_each(body);
    }
    out
}

/// Pair of 1-D transforms for the two axes.
#[derive(Debug, Clone)]
pub(crate) struct Trig2d {
    x: Trig1d,
    y: Trig1d,
}

impl Trig2d {
    pub(crate) fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        let x = Trig1d::new(nx, &mut planner);
        let y = Trig1d::new(ny, &mut planner);
        Self { x, y }
    }

    /// Unnormalized synthesis from an `nx x ny` coefficient block onto the
    /// `(nx+2) x (ny+2)` grid.
    pub(crate) fn synthesize(&self, coeffs: ArrayView2<'_, f64>, px: Parity, py: Parity) -> Array2<f64> {
        let ny2 = self.y.n + 2;
        let nx2 = self.x.n + 2;
        let along_y = map_lanes(coeffs, Axis(1), ny2, |c, o| self.y.synthesize(py, c, o));
        map_lanes(along_y.view(), Axis(0), nx2, |c, o| self.x.synthesize(px, c, o))
    }

    /// Unnormalized sine analysis of grid values into an `nx x ny` block.
    pub(crate) fn sine_analysis(&self, nodal: ArrayView2<'_, f64>) -> Array2<f64> {
        let along_y = map_lanes(nodal, Axis(1), self.y.n, |v, o| self.y.sine_analysis(v, o));
        map_lanes(along_y.view(), Axis(0), self.x.n, |v, o| self.x.sine_analysis(v, o))
    }
}
