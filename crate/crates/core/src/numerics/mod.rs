//! Shared numerical substrate: jittered Cholesky, quadrature, scalar products
//! and finite differences.

mod diff;
mod inner;
mod linalg;
mod quadrature;

pub use diff::{default_step, finite_diff};
pub use inner::{inner_product, inner_product_with, Differentiable, FnDerivs, KernelSection, SpaceSpec};
pub use linalg::{cholesky, factor_solve, residual_inf, Factorization, DEFAULT_JITTER_SCHEDULE};
pub use quadrature::{integrate, QuadratureRule, QuadratureScheme, DEFAULT_PANELS};
