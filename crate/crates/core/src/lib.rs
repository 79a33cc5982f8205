//! Minimum-norm interpolation in reproducing-kernel Hilbert spaces.
//!
//! A kernel `H` determines a Hilbert space of functions. Given finitely many
//! continuous linear functionals `k_j` and targets `alpha_j`, the element of
//! smallest norm satisfying `<k_j | f> = alpha_j` is a combination of the
//! representers of the `k_j`. The `schemes` module builds Lagrange, Taylor,
//! Bezier and odd-degree spline interpolants by choosing the kernel and the
//! functionals.
//!
//! ```
//! use rkhs_interp::schemes::lagrange_fit;
//!
//! let sigma = lagrange_fit(&[0.0, 0.5, 1.0], &[1.0, 0.0, 1.0]).unwrap();
//! assert!((sigma.eval1(0.25).unwrap() - 0.25).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod engine;
pub mod error;
pub mod kernel;
pub mod numerics;
pub mod schemes;

pub use algebra::{
    add_kernels, scale_kernel, schur_product, second_difference_kernel, tensor_kernel,
    CompositeKernel, CompositeOp,
};
pub use engine::{
    apply_functional_to_kernel, assemble_gram, solve_min_norm, Functional, FunctionalKind,
    GramMatrix, Interpolant, InterpolationProblem,
};
pub use error::{Error, Result};
pub use kernel::{BasicKernel, Family, H2Component, Kernel, PartialValue};
