//! Numerical verification of the inequalities satisfied by fractional powers
//! of the Dirichlet Laplacian: pointwise Córdoba–Córdoba, nonnegativity of
//! integrals, the nonlinear Poincaré table, power-domain membership, product
//! and trilinear estimates, and spectral interpolation.

pub mod cordoba;
pub mod error;
pub mod interpolation;
pub mod nonneg;
pub mod poincare;
pub mod power_domain;
pub mod product;
pub mod report;
pub mod suite;
pub mod testfield;
pub mod trilinear;

pub use cordoba::{cordoba_defect, cordoba_report, leibniz_residual, Phi};
pub use error::{IneqError, Result};
pub use interpolation::interpolation_check;
pub use nonneg::{integral_nonnegativity, nonnegativity_report};
pub use poincare::{poincare_constants, poincare_margin, PoincareCase};
pub use power_domain::{power_domain_check, PowerCase, RefinementReport};
pub use product::{gagliardo_norm, holder_seminorm, product_ratio, ProductVariant};
pub use report::{MarginKind, MarginReport};
pub use suite::{run_suite, SuiteConfig};
pub use testfield::{Generator, TestField};
pub use trilinear::trilinear_ratio;
