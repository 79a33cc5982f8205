//! Classical interpolants as minimum-norm problems over particular kernels.
//!
//! Each scheme only picks a kernel and a set of functionals; the solving is
//! always done by [`crate::engine::solve_min_norm`]. The closed forms the
//! constructions must reproduce are exposed next to them for cross-checks.

mod bezier;
mod catalog;
mod dirac;
mod odd_spline;

pub use bezier::{
    bezier_bilinear_fit, bilinear_closed_form, diagonal_bernstein_form, restrict_diagonal,
    BilinearPatch, DiagonalCurve, Surface,
};
pub use catalog::TestFunction;
pub use dirac::{
    dirac_convergence_study, dirac_convergence_study_with, peano_identity_check,
    peano_identity_check_with, DiracStudyRow, PeanoCheck, DEFAULT_DIRAC_STEPS,
};
pub use odd_spline::odd_spline_fit;

use crate::engine::{solve_min_norm, Functional, Interpolant, InterpolationProblem};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, DEFAULT_TAYLOR_TERMS};

/// Lagrange interpolating polynomial through `(nodes[j], values[j])`.
///
/// Solved over the kernel `sum_j L_j(s) L_j(t)` of `P_n` with the discrete
/// scalar product at the nodes, whose Gram matrix is the identity.
pub fn lagrange_fit(nodes: &[f64], values: &[f64]) -> Result<Interpolant> {
    if nodes.len() != values.len() {
        return Err(Error::param(
            "values",
            format!("{} nodes but {} values", nodes.len(), values.len()),
        ));
    }
    let kernel = Kernel::lagrange(nodes)?;
    solve_min_norm(&InterpolationProblem::points(kernel, nodes, values)?)
}

/// Taylor polynomial `sum_j alpha_j (t - t0)^j / j!` from the derivatives at `t0`.
pub fn taylor_fit(t0: f64, derivatives: &[f64]) -> Result<Interpolant> {
    taylor_fit_with(t0, derivatives, DEFAULT_TAYLOR_TERMS)
}

/// [`taylor_fit`] over a Taylor kernel truncated at `n_terms`.
pub fn taylor_fit_with(t0: f64, derivatives: &[f64], n_terms: usize) -> Result<Interpolant> {
    let kernel = Kernel::taylor(n_terms, t0)?;
    if derivatives.len() > n_terms {
        return Err(Error::Capability {
            kernel: format!("Taylor(n_terms={n_terms})"),
            order_s: derivatives.len() as u32 - 1,
            order_t: 0,
        });
    }
    let functionals = (0..derivatives.len() as u32)
        .map(|j| Functional::deriv(t0, j))
        .collect();
    solve_min_norm(&InterpolationProblem::new(
        kernel,
        functionals,
        derivatives.to_vec(),
    )?)
}
