//! Scalar products of the concrete Sobolev-type spaces, by quadrature.

use super::diff::{default_step, finite_diff};
use super::quadrature::{integrate, QuadratureRule};
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// A real function whose derivatives can be evaluated.
pub trait Differentiable {
    fn derivative(&self, x: f64, order: u32) -> f64;

    /// Points where some derivative the caller may request is discontinuous.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
}

type RealFn<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// A function given by its value and as many analytic derivatives as known.
///
/// Orders past the supplied ones are finite-differenced from the highest
/// supplied derivative.
pub struct FnDerivs<'a> {
    derivs: Vec<RealFn<'a>>,
    kinks: Vec<f64>,
}

impl<'a> FnDerivs<'a> {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        FnDerivs {
            derivs: vec![Box::new(value)],
            kinks: Vec::new(),
        }
    }

    /// Supplies the next derivative order.
    pub fn then(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.derivs.push(Box::new(d));
        self
    }

    pub fn with_kinks(mut self, kinks: impl IntoIterator<Item = f64>) -> Self {
        self.kinks.extend(kinks);
        self
    }
}

impl Differentiable for FnDerivs<'_> {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let known = self.derivs.len() - 1;
        match self.derivs.get(order as usize) {
            Some(d) => d(x),
            None => {
                let extra = order - known as u32;
                finite_diff(&self.derivs[known], x, extra, default_step(extra))
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        self.kinks.clone()
    }
}

/// The representer `H(., t)` of point evaluation at `t`.
pub struct KernelSection<'k> {
    pub kernel: &'k Kernel,
    pub t: f64,
}

impl Differentiable for KernelSection<'_> {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        self.kernel
            .partial1(x, self.t, order, 0)
            .unwrap_or(f64::NAN)
    }

    fn kinks(&self) -> Vec<f64> {
        vec![self.t]
    }
}

/// The function spaces whose scalar products the reproducing checks need.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// `{f in H^1(0,1) : f(0) = 0}`, `<f|g> = int_0^1 f'g'`.
    H1Zero0,
    /// `{f in H^1(0,2) : f(0) = f(2), int_0^2 f = 0}`, `<f|g> = int_0^2 f'g'`.
    Fourier02,
    /// `H^2(0,1)`, `<f|g> = f(0)g(0) + f'(0)g'(0) + int_0^1 f''g''`.
    H2Mixed,
    /// `{f in H^m(a,b) : f(theta_j) = 0}`, `<f|g> = int_a^b f^(m) g^(m)`.
    HmTheta {
        m: u32,
        thetas: Vec<f64>,
        interval: (f64, f64),
    },
}

const MEMBERSHIP_TOL: f64 = 1e-10;

impl SpaceSpec {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            SpaceSpec::H1Zero0 | SpaceSpec::H2Mixed => (0.0, 1.0),
            SpaceSpec::Fourier02 => (0.0, 2.0),
            SpaceSpec::HmTheta { interval, .. } => *interval,
        }
    }

    fn order(&self) -> u32 {
        match self {
            SpaceSpec::H1Zero0 | SpaceSpec::Fourier02 => 1,
            SpaceSpec::H2Mixed => 2,
            SpaceSpec::HmTheta { m, .. } => *m,
        }
    }

    /// Checks the side conditions defining the space.
    pub fn check_member(&self, f: &dyn Differentiable, rule: &QuadratureRule) -> Result<()> {
        let fail = |what: String| Err(Error::Membership(what));
        match self {
            SpaceSpec::H1Zero0 => {
                let f0 = f.value(0.0);
                if f0.abs() > MEMBERSHIP_TOL {
                    return fail(format!("f(0) = {f0}, expected 0"));
                }
            }
            SpaceSpec::Fourier02 => {
                let gap = f.value(0.0) - f.value(2.0);
                if gap.abs() > MEMBERSHIP_TOL {
                    return fail(format!("f(0) - f(2) = {gap}, expected 0"));
                }
                let rule = rule.clone().with_splits(f.kinks());
                let mean = integrate(|x| f.value(x), 0.0, 2.0, &rule);
                if mean.abs() > MEMBERSHIP_TOL {
                    return fail(format!("int_0^2 f = {mean}, expected 0"));
                }
            }
            SpaceSpec::H2Mixed => {}
            SpaceSpec::HmTheta { thetas, .. } => {
                for &th in thetas {
                    let v = f.value(th);
                    if v.abs() > MEMBERSHIP_TOL {
                        return fail(format!("f({th}) = {v}, expected 0"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Scalar product with the default 2000-panel Simpson rule.
pub fn inner_product(space: &SpaceSpec, f: &dyn Differentiable, g: &dyn Differentiable) -> Result<f64> {
    inner_product_with(space, f, g, &QuadratureRule::default())
}

/// Scalar product of `space`, with the integral split at the kinks of `f` and `g`.
pub fn inner_product_with(
    space: &SpaceSpec,
    f: &dyn Differentiable,
    g: &dyn Differentiable,
    rule: &QuadratureRule,
) -> Result<f64> {
    space.check_member(f, rule)?;
    space.check_member(g, rule)?;
    let (a, b) = space.interval();
    let m = space.order();
    let rule = rule.clone().with_splits(f.kinks()).with_splits(g.kinks());
    let integral = integrate(|x| f.derivative(x, m) * g.derivative(x, m), a, b, &rule);
    let boundary = match space {
        SpaceSpec::H2Mixed => {
            f.value(0.0) * g.value(0.0) + f.derivative(0.0, 1) * g.derivative(0.0, 1)
        }
        _ => 0.0,
    };
    Ok(boundary + integral)
}
