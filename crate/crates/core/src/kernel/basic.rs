//! Closed-form kernels of the elementary function spaces.
//!
//! Every family evaluates `H(s, t)` exactly from its formula; the
//! infinite-series families (Fourier, Taylor) are truncated at a
//! constructor-supplied number of terms.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Domain, Interval, PartialValue};
use crate::error::{Error, Result};

pub const DEFAULT_FOURIER_TERMS: usize = 64;
pub const DEFAULT_TAYLOR_TERMS: usize = 30;

/// Tag of a closed-form kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Polynomial,
    Spline01,
    Fourier,
    Lagrange,
    Taylor,
    Bernstein1,
    OddSpline,
    H2Part,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Polynomial,
        Family::Spline01,
        Family::Fourier,
        Family::Lagrange,
        Family::Taylor,
        Family::Bernstein1,
        Family::OddSpline,
        Family::H2Part,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Polynomial => "Polynomial",
            Family::Spline01 => "Spline01",
            Family::Fourier => "Fourier",
            Family::Lagrange => "Lagrange",
            Family::Taylor => "Taylor",
            Family::Bernstein1 => "Bernstein1",
            Family::OddSpline => "OddSpline",
            Family::H2Part => "H2Part",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Polynomials of degree at most `m` with the scalar product
/// `sum_j P^(j)(t0) Q^(j)(t0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialParams {
    pub m: u32,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierParams {
    #[serde(default = "default_fourier_terms")]
    pub n_terms: usize,
}

impl Default for FourierParams {
    fn default() -> Self {
        FourierParams {
            n_terms: DEFAULT_FOURIER_TERMS,
        }
    }
}

fn default_fourier_terms() -> usize {
    DEFAULT_FOURIER_TERMS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagrangeParams {
    pub nodes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorParams {
    #[serde(default = "default_taylor_terms")]
    pub n_terms: usize,
    #[serde(default)]
    pub t0: f64,
}

impl Default for TaylorParams {
    fn default() -> Self {
        TaylorParams {
            n_terms: DEFAULT_TAYLOR_TERMS,
            t0: 0.0,
        }
    }
}

fn default_taylor_terms() -> usize {
    DEFAULT_TAYLOR_TERMS
}

/// `{ f in H^m(a,b) : f(theta_j) = 0 }` with scalar product `int_a^b f^(m) g^(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddSplineParams {
    pub m: u32,
    pub thetas: Vec<f64>,
    pub interval: (f64, f64),
}

/// Which piece of the direct sum `H = K + L` on `H^2(0, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum H2Component {
    /// `K(s,t) = 1 + st`, kernel of `P_1` with `f(0)g(0) + f'(0)g'(0)`.
    K,
    /// `L(s,t) = (s-t)_+^3/3! + s^2 t/2! - s^3/3!`, kernel of `{f(0) = f'(0) = 0}`.
    L,
    #[default]
    H,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2PartParams {
    #[serde(default)]
    pub part: H2Component,
    /// Right end of the interval `[0, upper]`; the closed forms do not depend on it.
    #[serde(default = "default_upper")]
    pub upper: f64,
}

impl Default for H2PartParams {
    fn default() -> Self {
        H2PartParams {
            part: H2Component::H,
            upper: 1.0,
        }
    }
}

fn default_upper() -> f64 {
    1.0
}

/// Lagrange cardinal basis on a strictly increasing node set.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    // 1 / prod_{k != j} (x_j - x_k)
    weights: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        check_increasing("nodes", nodes)?;
        let weights = nodes
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let denom: f64 = nodes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &xk)| xj - xk)
                    .product();
                1.0 / denom
            })
            .collect();
        Ok(LagrangeBasis {
            nodes: nodes.to_vec(),
            weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `L_j(x)` by the product formula; exactly `delta_ij` at the nodes.
    pub fn value(&self, j: usize, x: f64) -> f64 {
        let prod: f64 = self
            .nodes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &xk)| x - xk)
            .product();
        prod * self.weights[j]
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        (0..self.len()).map(|j| self.value(j, x)).collect()
    }

    /// `L_j^(order)(x)`.
    pub fn derivative(&self, j: usize, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.value(j, x);
        }
        let n = order as usize;
        // c[d] = d-th Taylor coefficient at x of the partial product
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        for (_, &xk) in self.nodes.iter().enumerate().filter(|&(k, _)| k != j) {
            for d in (1..=n).rev() {
                c[d] = c[d] * (x - xk) + c[d - 1];
            }
            c[0] *= x - xk;
        }
        c[n] * factorial(order) * self.weights[j]
    }

    pub fn derivatives(&self, x: f64, order: u32) -> Vec<f64> {
        (0..self.len()).map(|j| self.derivative(j, x, order)).collect()
    }
}

fn check_increasing(name: &'static str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::param(name, "must contain at least one node"));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::param(name, format!("non-finite node {x}")));
    }
    if let Some(w) = xs.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::param(
            name,
            format!("must be strictly increasing ({} >= {})", w[0], w[1]),
        ));
    }
    Ok(())
}

/// Odd-degree spline kernel with its Lagrange projector precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct OddSplineKernel {
    params: OddSplineParams,
    basis: LagrangeBasis,
    // Green's function at the theta nodes
    green_thetas: Vec<Vec<f64>>,
    // 2 (2m-1)!
    green_denom: f64,
}

impl OddSplineKernel {
    pub fn new(params: OddSplineParams) -> Result<Self> {
        let (a, b) = params.interval;
        if params.m < 2 {
            return Err(Error::param("m", format!("must be >= 2, got {}", params.m)));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::param(
                "interval",
                format!("need finite a < b, got ({a}, {b})"),
            ));
        }
        if params.thetas.len() != params.m as usize {
            return Err(Error::param(
                "thetas",
                format!(
                    "need exactly m = {} nodes, got {}",
                    params.m,
                    params.thetas.len()
                ),
            ));
        }
        let basis = LagrangeBasis::new(&params.thetas).map_err(|e| match e {
            Error::Parameter { reason, .. } => Error::param("thetas", reason),
            e => e,
        })?;
        if let Some(th) = params.thetas.iter().find(|&&th| th <= a || th >= b) {
            return Err(Error::param(
                "thetas",
                format!("{th} is not inside the open interval ({a}, {b})"),
            ));
        }
        let p = 2 * params.m - 1;
        let green_denom = 2.0 * factorial(p);
        let green_thetas = params
            .thetas
            .iter()
            .map(|&x| {
                params
                    .thetas
                    .iter()
                    .map(|&y| (x - y).abs().powi(p as i32) / green_denom)
                    .collect()
            })
            .collect();
        Ok(OddSplineKernel {
            params,
            basis,
            green_thetas,
            green_denom,
        })
    }

    pub fn params(&self) -> &OddSplineParams {
        &self.params
    }

    /// Even part of `G_m(x, y) = (x - y)_+^(2m-1) / (2m-1)!`.
    ///
    /// The odd remainder `(x - y)^(2m-1) / (2 (2m-1)!)` has every monomial of
    /// degree below `m` in one of its arguments, so the two-sided Lagrange
    /// projection removes it and the kernel is unchanged.
    pub fn green(&self, x: f64, y: f64) -> f64 {
        (x - y).abs().powi(2 * self.params.m as i32 - 1) / self.green_denom
    }

    // (value, at kink) of d^a/dx^a d^b/dy^b green(x, y)
    fn green_partial(&self, x: f64, y: f64, a: u32, b: u32) -> (f64, bool) {
        let p = 2 * self.params.m - 1;
        let n = a + b;
        if n > p {
            return (0.0, false);
        }
        let u = x - y;
        // at u = 0 only n = p survives, as the limit from x > y
        let sign = if u < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        let slot = if b % 2 == 1 { -1.0 } else { 1.0 };
        let value = factorial(p) / factorial(p - n) * u.abs().powi((p - n) as i32) / self.green_denom;
        (sign * slot * value, u == 0.0 && n == p)
    }

    fn eval_partial(&self, s: f64, t: f64, a: u32, b: u32) -> PartialValue {
        if (a, b) == (0, 0) {
            return PartialValue::smooth(self.eval(s, t));
        }
        let ls = self.basis.derivatives(s, a);
        let lt = self.basis.derivatives(t, b);
        let thetas = self.basis.nodes();
        let (mut acc, mut kink) = self.green_partial(s, t, a, b);
        for (j, &th) in thetas.iter().enumerate() {
            let (g, k) = self.green_partial(th, t, 0, b);
            acc -= ls[j] * g;
            kink |= k && ls[j] != 0.0;
            let (g, k) = self.green_partial(s, th, a, 0);
            acc -= lt[j] * g;
            kink |= k && lt[j] != 0.0;
        }
        for (j, row) in self.green_thetas.iter().enumerate() {
            let inner: f64 = row.iter().zip(&lt).map(|(g, l)| g * l).sum();
            acc += ls[j] * inner;
        }
        PartialValue {
            value: if self.params.m % 2 == 0 { acc } else { -acc },
            at_kink: kink,
        }
    }

    fn eval(&self, s: f64, t: f64) -> f64 {
        let ls = self.basis.values(s);
        let lt = self.basis.values(t);
        let thetas = self.basis.nodes();
        let mut acc = self.green(s, t);
        for (j, &th) in thetas.iter().enumerate() {
            acc -= ls[j] * self.green(th, t);
            acc -= lt[j] * self.green(s, th);
        }
        for (j, row) in self.green_thetas.iter().enumerate() {
            let inner: f64 = row.iter().zip(&lt).map(|(g, l)| g * l).sum();
            acc += ls[j] * inner;
        }
        if self.params.m % 2 == 0 {
            acc
        } else {
            -acc
        }
    }
}

/// The closed-form kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum BasicKernel {
    Polynomial(PolynomialParams),
    Spline01,
    Fourier(FourierParams),
    Lagrange(LagrangeBasis),
    Taylor(TaylorParams),
    Bernstein1,
    OddSpline(OddSplineKernel),
    H2Part(H2PartParams),
}

impl BasicKernel {
    pub fn polynomial(m: u32, t0: f64) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::param("t0", "must be finite"));
        }
        Ok(BasicKernel::Polynomial(PolynomialParams { m, t0 }))
    }

    pub fn fourier(n_terms: usize) -> Result<Self> {
        if n_terms < 1 {
            return Err(Error::param("n_terms", "must be >= 1"));
        }
        Ok(BasicKernel::Fourier(FourierParams { n_terms }))
    }

    pub fn lagrange(nodes: &[f64]) -> Result<Self> {
        Ok(BasicKernel::Lagrange(LagrangeBasis::new(nodes)?))
    }

    pub fn taylor(n_terms: usize, t0: f64) -> Result<Self> {
        if n_terms < 1 {
            return Err(Error::param("n_terms", "must be >= 1"));
        }
        if !t0.is_finite() {
            return Err(Error::param("t0", "must be finite"));
        }
        Ok(BasicKernel::Taylor(TaylorParams { n_terms, t0 }))
    }

    pub fn odd_spline(m: u32, thetas: &[f64], interval: (f64, f64)) -> Result<Self> {
        Ok(BasicKernel::OddSpline(OddSplineKernel::new(
            OddSplineParams {
                m,
                thetas: thetas.to_vec(),
                interval,
            },
        )?))
    }

    pub fn h2(part: H2Component, upper: f64) -> Result<Self> {
        if !(upper.is_finite() && upper > 0.0) {
            return Err(Error::param("upper", format!("must be > 0, got {upper}")));
        }
        Ok(BasicKernel::H2Part(H2PartParams { part, upper }))
    }

    pub fn family(&self) -> Family {
        match self {
            BasicKernel::Polynomial(_) => Family::Polynomial,
            BasicKernel::Spline01 => Family::Spline01,
            BasicKernel::Fourier(_) => Family::Fourier,
            BasicKernel::Lagrange(_) => Family::Lagrange,
            BasicKernel::Taylor(_) => Family::Taylor,
            BasicKernel::Bernstein1 => Family::Bernstein1,
            BasicKernel::OddSpline(_) => Family::OddSpline,
            BasicKernel::H2Part(_) => Family::H2Part,
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            BasicKernel::Spline01 => Interval::new(0.0, 1.0),
            BasicKernel::Fourier(_) => Interval::new(0.0, 2.0),
            BasicKernel::OddSpline(k) => Interval::new(k.params.interval.0, k.params.interval.1),
            BasicKernel::H2Part(p) => Interval::new(0.0, p.upper),
            BasicKernel::Polynomial(_)
            | BasicKernel::Taylor(_)
            | BasicKernel::Lagrange(_)
            | BasicKernel::Bernstein1 => Interval::REAL_LINE,
        }
    }

    pub fn domain(&self) -> Domain {
        Domain::interval(self.interval())
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.eval_partial(s, t, 0, 0)?.value)
    }

    /// `d^order_s/ds d^order_t/dt H(s, t)` from the closed form.
    ///
    /// On the diagonal of a truncated-power kernel, orders that jump there
    /// return the limit from `s > t` with `at_kink` set.
    pub fn eval_partial(&self, s: f64, t: f64, order_s: u32, order_t: u32) -> Result<PartialValue> {
        let iv = self.interval();
        iv.check(s)?;
        iv.check(t)?;
        let unsupported = || Error::Capability {
            kernel: self.family().to_string(),
            order_s,
            order_t,
        };
        let smooth = PartialValue::smooth;
        let pv = match self {
            BasicKernel::Polynomial(p) => {
                smooth(series_partial(p.m as usize + 1, p.t0, s, t, order_s, order_t))
            }
            BasicKernel::Taylor(p) => {
                smooth(series_partial(p.n_terms, p.t0, s, t, order_s, order_t))
            }
            BasicKernel::Fourier(p) => smooth(fourier_partial(p.n_terms, s, t, order_s, order_t)),
            BasicKernel::Bernstein1 => smooth(match (order_s, order_t) {
                (0, 0) => s * t + (1.0 - s) * (1.0 - t),
                (1, 0) => 2.0 * t - 1.0,
                (0, 1) => 2.0 * s - 1.0,
                (1, 1) => 2.0,
                _ => 0.0,
            }),
            BasicKernel::Lagrange(basis) => {
                if (order_s, order_t) != (0, 0) {
                    return Err(unsupported());
                }
                smooth(
                    (0..basis.len())
                        .map(|j| basis.value(j, s) * basis.value(j, t))
                        .sum(),
                )
            }
            BasicKernel::OddSpline(k) => {
                let top = 2 * k.params.m - 1;
                if order_s > top || order_t > top {
                    return Err(unsupported());
                }
                k.eval_partial(s, t, order_s, order_t)
            }
            BasicKernel::Spline01 => {
                if order_s > 1 || order_t > 1 {
                    return Err(unsupported());
                }
                min_kernel_partial(s, t, order_s, order_t)
            }
            BasicKernel::H2Part(p) => {
                if order_s > 2 || order_t > 2 {
                    return Err(unsupported());
                }
                match p.part {
                    H2Component::K => smooth(k_partial(s, t, order_s, order_t)),
                    H2Component::L => l_partial(s, t, order_s, order_t),
                    H2Component::H => {
                        let l = l_partial(s, t, order_s, order_t);
                        PartialValue {
                            value: k_partial(s, t, order_s, order_t) + l.value,
                            at_kink: l.at_kink,
                        }
                    }
                }
            }
        };
        Ok(pv)
    }
}

impl BasicKernel {
    /// Unscaled mixed forward difference `D_h^2 (x) D_h^2` of an `H^2` kernel,
    /// differentiated `(order_s, order_t)` times; `None` for other families.
    ///
    /// `K` and the polynomial part of `L` are affine in `t`, so their
    /// differences vanish identically. What remains is
    /// `sum_k w_k (x + k h)_+^3 / 3!` over `k = -2..=2` with `x = s - t` and
    /// `w = (1, -4, 6, -4, 1)`, which avoids cancelling the large smooth part.
    pub(crate) fn h2_second_difference(
        &self,
        s: f64,
        t: f64,
        h: f64,
        order_s: u32,
        order_t: u32,
    ) -> Option<PartialValue> {
        let BasicKernel::H2Part(p) = self else {
            return None;
        };
        if order_s > 2 || order_t > 2 {
            return None;
        }
        if p.part == H2Component::K {
            return Some(PartialValue::smooth(0.0));
        }
        const W: [f64; 5] = [1.0, -4.0, 6.0, -4.0, 1.0];
        let n = order_s + order_t;
        // the fourth difference of a cubic is zero, so the sum is even in x
        let x = if n == 0 { (s - t).abs() } else { s - t };
        let sign = if order_t % 2 == 0 { 1.0 } else { -1.0 };
        let mut out = PartialValue::smooth(0.0);
        for (k, w) in (-2..=2).zip(W) {
            let y = x + f64::from(k) * h;
            out.at_kink |= y == 0.0 && n >= 3;
            let term = match n {
                // sum_k w_k y_k^p = 0, so the sum may be taken over (-y)_+ instead;
                // use the side with fewer active terms
                0..=2 => {
                    let p = 3 - n;
                    let (z, flip) = if x > 0.0 { (-y, (p + 1) % 2 == 1) } else { (y, false) };
                    let v = if z > 0.0 { z.powi(p as i32) / factorial(p) } else { 0.0 };
                    if flip {
                        -v
                    } else {
                        v
                    }
                }
                3 => f64::from(u8::from(y >= 0.0)),
                _ => 0.0,
            };
            out.value += sign * w * term;
        }
        Some(out)
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `x^k / k!`, accumulated term by term.
fn pow_over_factorial(x: f64, k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * x / i as f64)
}

/// Partial of `sum_{j < n_terms} (s-t0)^j/j! (t-t0)^j/j!`.
fn series_partial(n_terms: usize, t0: f64, s: f64, t: f64, a: u32, b: u32) -> f64 {
    let (a, b) = (a as usize, b as usize);
    let (x, y) = (s - t0, t - t0);
    (a.max(b)..n_terms)
        .map(|j| pow_over_factorial(x, j - a) * pow_over_factorial(y, j - b))
        .sum()
}

/// Partial of `sum_{k=1}^{N} cos(k pi (t - s)) / (k pi)^2`.
fn fourier_partial(n_terms: usize, s: f64, t: f64, a: u32, b: u32) -> f64 {
    let n = a + b;
    let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
    let phase = f64::from(n) * PI / 2.0;
    let x = t - s;
    let total: f64 = (1..=n_terms)
        .map(|k| {
            let w = k as f64 * PI;
            w.powi(n as i32 - 2) * (w * x + phase).cos()
        })
        .sum();
    sign * total
}

/// Partials of `min(s, t) = t - (t - s)_+`.
fn min_kernel_partial(s: f64, t: f64, a: u32, b: u32) -> PartialValue {
    let kink = s == t && (a, b) != (0, 0);
    // at the kink take the s > t branch
    let below = s < t;
    let value = match (a, b) {
        (0, 0) => s.min(t),
        (1, 0) => f64::from(u8::from(below)),
        (0, 1) => f64::from(u8::from(!below)),
        _ => 0.0,
    };
    PartialValue {
        value,
        at_kink: kink,
    }
}

fn k_partial(s: f64, t: f64, a: u32, b: u32) -> f64 {
    match (a, b) {
        (0, 0) => 1.0 + s * t,
        (1, 0) => t,
        (0, 1) => s,
        (1, 1) => 1.0,
        _ => 0.0,
    }
}

/// Partials of `L(s,t) = (s-t)_+^3/6 + s^2 t/2 - s^3/6`, orders up to 2 per slot.
fn l_partial(s: f64, t: f64, a: u32, b: u32) -> PartialValue {
    let below = s < t;
    let value = match (a, b, below) {
        (0, 0, true) => s * s * t / 2.0 - s * s * s / 6.0,
        (0, 0, false) => s * t * t / 2.0 - t * t * t / 6.0,
        (1, 0, true) => s * t - s * s / 2.0,
        (1, 0, false) => t * t / 2.0,
        (0, 1, true) => s * s / 2.0,
        (0, 1, false) => s * t - t * t / 2.0,
        (2, 0, true) => t - s,
        (0, 2, false) => s - t,
        (1, 1, _) => s.min(t),
        (2, 1, true) => 1.0,
        (1, 2, false) => 1.0,
        _ => 0.0,
    };
    PartialValue {
        value,
        at_kink: s == t && a + b >= 3,
    }
}
