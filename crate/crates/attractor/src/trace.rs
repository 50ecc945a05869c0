//! Trace of the linearized operator on the span of a bundle.

use fracsqg_core::SpectralField;
use fracsqg_sqg::{Integrator, SQGState};
use nalgebra::DMatrix;

use crate::bundle::{dlambda_inner, gram, TangentBundle};
use crate::error::{config, AttractorError, Result};
use crate::tangent::apply_linearized;

/// Gram tolerance for bundles handed to [`trace_aqn`].
pub const ORTHONORMAL_TOL: f64 = 1e-8;

/// `sum_i (A phi_i, -Delta phi_i)` over a D(Lambda)-orthonormal bundle.
pub fn trace_aqn(bundle: &TangentBundle, base: &SQGState, integ: &Integrator) -> Result<f64> {
    let deviation = bundle.orthonormality_defect()?;
    if !(deviation <= ORTHONORMAL_TOL) {
        return Err(AttractorError::NotOrthonormal { deviation });
    }
    bundle.fields().iter().try_fold(0.0, |acc, phi| {
        let a = apply_linearized(phi, base, integ)?;
        Ok(acc + dlambda_inner(&a, phi)?)
    })
}

/// Diagonal of `L^-1 M L^-T` where `G = L L^T` is the D(Lambda) Gram matrix of
/// `fields` and `M_ij = (xi_i, A xi_j)`. The first `k` entries sum to the trace
/// of `A` compressed to the span of the first `k` fields, for every `k`.
pub fn nested_traces(fields: &[SpectralField], images: &[SpectralField]) -> Result<Vec<f64>> {
    let n = fields.len();
    if images.len() != n {
        return Err(config("one image per tangent field is required"));
    }
    let g = gram(fields)?;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = dlambda_inner(&fields[i], &images[j])?;
        }
    }
    let chol = g.cholesky().ok_or(AttractorError::Degenerate {
        index: n,
        normalizer: 0.0,
        scale: 0.0,
    })?;
    let l = chol.l();
    let linv = l
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| config("singular Cholesky factor"))?;
    let c = &linv * m * linv.transpose();
    Ok((0..n).map(|i| c[(i, i)]).collect())
}
