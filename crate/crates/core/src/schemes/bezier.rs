use serde::{Deserialize, Serialize};

use crate::algebra::tensor_kernel;
use crate::engine::{solve_min_norm, Functional, Interpolant, InterpolationProblem};
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Corner values of a bilinear patch; `a01` is the value at `(s, t) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearPatch {
    pub a00: f64,
    pub a01: f64,
    pub a10: f64,
    pub a11: f64,
}

impl BilinearPatch {
    pub fn new(a00: f64, a01: f64, a10: f64, a11: f64) -> Self {
        BilinearPatch { a00, a01, a10, a11 }
    }
}

/// A real function of two real variables.
pub trait Surface {
    fn value(&self, s: f64, t: f64) -> Result<f64>;
}

impl Surface for Interpolant {
    fn value(&self, s: f64, t: f64) -> Result<f64> {
        if self.kernel().dim() != 2 {
            return Err(Error::DomainMismatch(format!(
                "{} is not a surface kernel",
                self.kernel().name()
            )));
        }
        self.eval(&[s, t])
    }
}

/// Minimum-norm solve over `Bernstein1 (x) Bernstein1` with the four corner values.
pub fn bezier_bilinear_fit(patch: &BilinearPatch) -> Result<Interpolant> {
    let kernel: Kernel = tensor_kernel(Kernel::bernstein1(), Kernel::bernstein1()).into();
    let corners = [
        ([0.0, 0.0], patch.a00),
        ([1.0, 0.0], patch.a10),
        ([0.0, 1.0], patch.a01),
        ([1.0, 1.0], patch.a11),
    ];
    let functionals = corners.iter().map(|(p, _)| Functional::point_nd(p)).collect();
    let targets = corners.iter().map(|&(_, a)| a).collect();
    solve_min_norm(&InterpolationProblem::new(kernel, functionals, targets)?)
}

/// `a00 (1-s)(1-t) + a01 (1-s) t + a10 s (1-t) + a11 s t`.
pub fn bilinear_closed_form(p: &BilinearPatch, s: f64, t: f64) -> f64 {
    p.a00 * (1.0 - s) * (1.0 - t) + p.a01 * (1.0 - s) * t + p.a10 * s * (1.0 - t) + p.a11 * s * t
}

/// Degree-2 Bernstein form of the patch on the diagonal `s = t`.
pub fn diagonal_bernstein_form(p: &BilinearPatch, s: f64) -> f64 {
    p.a00 * (1.0 - s) * (1.0 - s) + (p.a01 + p.a10) * s * (1.0 - s) + p.a11 * s * s
}

/// `tau(s) = sigma(s, s)`.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalCurve<'a, S: Surface> {
    surface: &'a S,
}

impl<S: Surface> DiagonalCurve<'_, S> {
    pub fn value(&self, s: f64) -> Result<f64> {
        self.surface.value(s, s)
    }
}

pub fn restrict_diagonal<S: Surface>(surface: &S) -> DiagonalCurve<'_, S> {
    DiagonalCurve { surface }
}
