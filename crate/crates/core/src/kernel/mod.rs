//! Reproducing kernels: the closed-form families and the combinators built on them.

mod basic;
mod domain;
mod json;

pub use basic::{
    BasicKernel, Family, FourierParams, H2Component, H2PartParams, LagrangeBasis,
    LagrangeParams, OddSplineKernel, OddSplineParams, PolynomialParams, TaylorParams,
    DEFAULT_FOURIER_TERMS, DEFAULT_TAYLOR_TERMS,
};
pub use domain::{Domain, Interval};

use crate::algebra::CompositeKernel;
use crate::error::{Error, Result};

/// Value of a partial derivative, flagged when evaluated on a kink where it jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialValue {
    pub value: f64,
    pub at_kink: bool,
}

impl PartialValue {
    pub fn smooth(value: f64) -> Self {
        PartialValue {
            value,
            at_kink: false,
        }
    }
}

/// A symmetric positive-type function `H(s, t)` on `Domain x Domain`.
///
/// Kernels are immutable once built; evaluation is pure and can run from
/// any number of threads.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Basic(BasicKernel),
    Composite(CompositeKernel),
}

impl From<BasicKernel> for Kernel {
    fn from(k: BasicKernel) -> Self {
        Kernel::Basic(k)
    }
}

impl From<CompositeKernel> for Kernel {
    fn from(k: CompositeKernel) -> Self {
        Kernel::Composite(k)
    }
}

impl Kernel {
    pub fn spline01() -> Self {
        BasicKernel::Spline01.into()
    }

    pub fn bernstein1() -> Self {
        BasicKernel::Bernstein1.into()
    }

    pub fn polynomial(m: u32, t0: f64) -> Result<Self> {
        BasicKernel::polynomial(m, t0).map(Into::into)
    }

    pub fn fourier(n_terms: usize) -> Result<Self> {
        BasicKernel::fourier(n_terms).map(Into::into)
    }

    pub fn lagrange(nodes: &[f64]) -> Result<Self> {
        BasicKernel::lagrange(nodes).map(Into::into)
    }

    pub fn taylor(n_terms: usize, t0: f64) -> Result<Self> {
        BasicKernel::taylor(n_terms, t0).map(Into::into)
    }

    pub fn odd_spline(m: u32, thetas: &[f64], interval: (f64, f64)) -> Result<Self> {
        BasicKernel::odd_spline(m, thetas, interval).map(Into::into)
    }

    /// `K`, `L` or `H = K + L` on `[0, 1]`.
    pub fn h2(part: H2Component) -> Self {
        BasicKernel::H2Part(H2PartParams { part, upper: 1.0 }).into()
    }

    pub fn h2_on(part: H2Component, upper: f64) -> Result<Self> {
        BasicKernel::h2(part, upper).map(Into::into)
    }

    pub fn domain(&self) -> Domain {
        match self {
            Kernel::Basic(k) => k.domain(),
            Kernel::Composite(c) => c.domain().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Kernel::Basic(_) => 1,
            Kernel::Composite(c) => c.domain().dim(),
        }
    }

    /// Short human-readable description used in error messages.
    pub fn name(&self) -> String {
        match self {
            Kernel::Basic(k) => k.family().to_string(),
            Kernel::Composite(c) => c.name(),
        }
    }

    pub fn eval(&self, s: &[f64], t: &[f64]) -> Result<f64> {
        match self {
            Kernel::Basic(k) => k.eval(scalar(s)?, scalar(t)?),
            Kernel::Composite(c) => c.eval(s, t),
        }
    }

    pub fn eval_partial(
        &self,
        s: &[f64],
        t: &[f64],
        order_s: u32,
        order_t: u32,
    ) -> Result<PartialValue> {
        match self {
            Kernel::Basic(k) => k.eval_partial(scalar(s)?, scalar(t)?, order_s, order_t),
            Kernel::Composite(c) => c.eval_partial(s, t, order_s, order_t),
        }
    }

    /// `eval` for kernels on a one-dimensional domain.
    pub fn eval1(&self, s: f64, t: f64) -> Result<f64> {
        self.eval(&[s], &[t])
    }

    pub fn partial1(&self, s: f64, t: f64, order_s: u32, order_t: u32) -> Result<f64> {
        Ok(self.eval_partial(&[s], &[t], order_s, order_t)?.value)
    }

    /// `[H(x_i, x_j)]` over a set of one-dimensional nodes.
    pub fn gram1(&self, nodes: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let n = nodes.len();
        let mut g = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.eval1(nodes[i], nodes[j])?;
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_value(self)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        json::from_value(value)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

fn scalar(p: &[f64]) -> Result<f64> {
    match p {
        [x] => Ok(*x),
        _ => Err(Error::DomainMismatch(format!(
            "point has {} coordinates, kernel expects 1",
            p.len()
        ))),
    }
}

impl serde::Serialize for Kernel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for Kernel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        Kernel::from_json(&value).map_err(serde::de::Error::custom)
    }
}
