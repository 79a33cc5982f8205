//! Combinators producing new reproducing kernels from existing ones.
//!
//! Nonnegative scaling, sums, tensor products, pointwise (Schur) products
//! and the mixed forward second difference `D_h^2 (x) D_h^2` all map
//! positive-type kernels to positive-type kernels.

use crate::error::{Error, Result};
use crate::kernel::{Domain, Interval, Kernel, PartialValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeOp {
    Scale,
    Sum,
    Tensor,
    SchurProduct,
    SecondDifference,
}

impl CompositeOp {
    pub fn name(self) -> &'static str {
        match self {
            CompositeOp::Scale => "scale",
            CompositeOp::Sum => "add",
            CompositeOp::Tensor => "tensor",
            CompositeOp::SchurProduct => "schur",
            CompositeOp::SecondDifference => "second_difference",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "scale" => CompositeOp::Scale,
            "add" | "sum" => CompositeOp::Sum,
            "tensor" => CompositeOp::Tensor,
            "schur" | "schur_product" | "product" => CompositeOp::SchurProduct,
            "second_difference" | "second_diff" => CompositeOp::SecondDifference,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            CompositeOp::Scale | CompositeOp::SecondDifference => 1,
            _ => 2,
        }
    }
}

/// A kernel built from one or two operand kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeKernel {
    op: CompositeOp,
    operands: Vec<Kernel>,
    lambda: f64,
    h: f64,
    domain: Domain,
}

// forward second-difference weights for offsets 0, h, 2h
const SECOND_DIFF: [f64; 3] = [1.0, -2.0, 1.0];

pub fn scale_kernel(lambda: f64, k: Kernel) -> Result<CompositeKernel> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::param(
            "lambda",
            format!("scale must be finite and >= 0, got {lambda}"),
        ));
    }
    let domain = k.domain();
    Ok(CompositeKernel {
        op: CompositeOp::Scale,
        operands: vec![k],
        lambda,
        h: 0.0,
        domain,
    })
}

fn common_domain(k1: &Kernel, k2: &Kernel) -> Result<Domain> {
    let (d1, d2) = (k1.domain(), k2.domain());
    d1.intersect(&d2).ok_or_else(|| {
        Error::DomainMismatch(format!(
            "{} and {} have no common domain ({:?} vs {:?})",
            k1.name(),
            k2.name(),
            d1.0,
            d2.0
        ))
    })
}

/// Pointwise sum; lives on the intersection of the operand domains.
pub fn add_kernels(k1: Kernel, k2: Kernel) -> Result<CompositeKernel> {
    let domain = common_domain(&k1, &k2)?;
    Ok(CompositeKernel {
        op: CompositeOp::Sum,
        operands: vec![k1, k2],
        lambda: 1.0,
        h: 0.0,
        domain,
    })
}

/// `H((s, s'), (t, t')) = H1(s, t) H2(s', t')` on the product domain.
pub fn tensor_kernel(k1: Kernel, k2: Kernel) -> CompositeKernel {
    let domain = k1.domain().product(&k2.domain());
    CompositeKernel {
        op: CompositeOp::Tensor,
        operands: vec![k1, k2],
        lambda: 1.0,
        h: 0.0,
        domain,
    }
}

/// Pointwise product, i.e. the tensor product restricted to the diagonal.
pub fn schur_product(k1: Kernel, k2: Kernel) -> Result<CompositeKernel> {
    let domain = common_domain(&k1, &k2)?;
    Ok(CompositeKernel {
        op: CompositeOp::SchurProduct,
        operands: vec![k1, k2],
        lambda: 1.0,
        h: 0.0,
        domain,
    })
}

/// `D_h^2` applied in both arguments, with `D_h g(x) = (g(x + h) - g(x)) / h`.
///
/// Shifted evaluations reach `x + 2h`, so the domain shrinks to
/// `[lo, hi - 2h]`.
pub fn second_difference_kernel(k: Kernel, h: f64) -> Result<CompositeKernel> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::param("h", format!("step must be > 0, got {h}")));
    }
    let d = k.domain();
    if d.dim() != 1 {
        return Err(Error::DomainMismatch(format!(
            "second difference needs a one-dimensional kernel, {} has dimension {}",
            k.name(),
            d.dim()
        )));
    }
    let iv = d.0[0];
    let hi = iv.hi - 2.0 * h;
    if hi < iv.lo {
        return Err(Error::param(
            "h",
            format!("2h = {} exceeds the domain length of {}", 2.0 * h, k.name()),
        ));
    }
    Ok(CompositeKernel {
        op: CompositeOp::SecondDifference,
        operands: vec![k],
        lambda: 1.0,
        h,
        domain: Domain::interval(Interval::new(iv.lo, hi)),
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

impl CompositeKernel {
    pub fn op(&self) -> CompositeOp {
        self.op
    }

    pub fn operands(&self) -> &[Kernel] {
        &self.operands
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Scale factor, for `Scale` only.
    pub fn lambda(&self) -> Option<f64> {
        (self.op == CompositeOp::Scale).then_some(self.lambda)
    }

    /// Difference step, for `SecondDifference` only.
    pub fn step(&self) -> Option<f64> {
        (self.op == CompositeOp::SecondDifference).then_some(self.h)
    }

    pub fn name(&self) -> String {
        let args: Vec<String> = self.operands.iter().map(Kernel::name).collect();
        match self.op {
            CompositeOp::Scale => format!("scale({}, {})", self.lambda, args[0]),
            CompositeOp::SecondDifference => format!("second_difference({}, h={})", args[0], self.h),
            op => format!("{}({})", op.name(), args.join(", ")),
        }
    }

    pub fn eval(&self, s: &[f64], t: &[f64]) -> Result<f64> {
        self.domain.check(s)?;
        self.domain.check(t)?;
        let k = &self.operands;
        match self.op {
            CompositeOp::Scale => Ok(self.lambda * k[0].eval(s, t)?),
            CompositeOp::Sum => Ok(k[0].eval(s, t)? + k[1].eval(s, t)?),
            CompositeOp::SchurProduct => Ok(k[0].eval(s, t)? * k[1].eval(s, t)?),
            CompositeOp::Tensor => {
                let d = k[0].dim();
                Ok(k[0].eval(&s[..d], &t[..d])? * k[1].eval(&s[d..], &t[d..])?)
            }
            CompositeOp::SecondDifference => Ok(self.second_difference(s[0], t[0], 0, 0)?.value),
        }
    }

    pub fn eval_partial(
        &self,
        s: &[f64],
        t: &[f64],
        order_s: u32,
        order_t: u32,
    ) -> Result<PartialValue> {
        if (order_s, order_t) == (0, 0) {
            return self.eval(s, t).map(PartialValue::smooth);
        }
        self.domain.check(s)?;
        self.domain.check(t)?;
        let k = &self.operands;
        match self.op {
            CompositeOp::Scale => {
                let pv = k[0].eval_partial(s, t, order_s, order_t)?;
                Ok(PartialValue {
                    value: self.lambda * pv.value,
                    ..pv
                })
            }
            CompositeOp::Sum => {
                let a = k[0].eval_partial(s, t, order_s, order_t)?;
                let b = k[1].eval_partial(s, t, order_s, order_t)?;
                Ok(PartialValue {
                    value: a.value + b.value,
                    at_kink: a.at_kink || b.at_kink,
                })
            }
            CompositeOp::SchurProduct if self.domain.dim() == 1 => {
                // Leibniz rule in each argument
                let mut out = PartialValue::smooth(0.0);
                for i in 0..=order_s {
                    for j in 0..=order_t {
                        let a = k[0].eval_partial(s, t, i, j)?;
                        let b = k[1].eval_partial(s, t, order_s - i, order_t - j)?;
                        out.value += binomial(order_s, i) * binomial(order_t, j) * a.value * b.value;
                        out.at_kink |= a.at_kink || b.at_kink;
                    }
                }
                Ok(out)
            }
            CompositeOp::SecondDifference => self.second_difference(s[0], t[0], order_s, order_t),
            CompositeOp::SchurProduct | CompositeOp::Tensor => Err(Error::Capability {
                kernel: self.name(),
                order_s,
                order_t,
            }),
        }
    }

    fn second_difference(&self, s: f64, t: f64, order_s: u32, order_t: u32) -> Result<PartialValue> {
        let inner = &self.operands[0];
        let h = self.h;
        if let Kernel::Basic(b) = inner {
            if let Some(pv) = b.h2_second_difference(s, t, h, order_s, order_t) {
                return Ok(PartialValue {
                    value: pv.value / h.powi(4),
                    ..pv
                });
            }
        }
        let mut out = PartialValue::smooth(0.0);
        for (i, ci) in SECOND_DIFF.iter().enumerate() {
            for (j, cj) in SECOND_DIFF.iter().enumerate() {
                let pv = inner.eval_partial(
                    &[s + i as f64 * h],
                    &[t + j as f64 * h],
                    order_s,
                    order_t,
                )?;
                out.value += ci * cj * pv.value;
                out.at_kink |= pv.at_kink;
            }
        }
        out.value /= h.powi(4);
        Ok(out)
    }
}
