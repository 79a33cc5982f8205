//! JSON form of kernels.
//!
//! Closed-form kernels are `{"family": "<Family>", "params": {...}}`;
//! combinators are `{"op": "<op>", "args": [...], "lambda": x, "h": x}`.

use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use super::{
    BasicKernel, Family, FourierParams, H2PartParams, Kernel, LagrangeParams, OddSplineKernel,
    PolynomialParams, TaylorParams,
};
use crate::algebra::{self, CompositeOp};
use crate::error::{Error, Result};

pub(super) fn to_value(kernel: &Kernel) -> Value {
    match kernel {
        Kernel::Basic(k) => basic_to_value(k),
        Kernel::Composite(c) => {
            let mut obj = Map::new();
            obj.insert("op".into(), json!(c.op().name()));
            obj.insert(
                "args".into(),
                Value::Array(c.operands().iter().map(to_value).collect()),
            );
            if let Some(lambda) = c.lambda() {
                obj.insert("lambda".into(), json!(lambda));
            }
            if let Some(h) = c.step() {
                obj.insert("h".into(), json!(h));
            }
            Value::Object(obj)
        }
    }
}

fn basic_to_value(k: &BasicKernel) -> Value {
    let params = match k {
        BasicKernel::Polynomial(p) => json!(p),
        BasicKernel::Fourier(p) => json!(p),
        BasicKernel::Lagrange(b) => json!({ "nodes": b.nodes() }),
        BasicKernel::Taylor(p) => json!(p),
        BasicKernel::OddSpline(k) => json!(k.params()),
        BasicKernel::H2Part(p) => json!(p),
        BasicKernel::Spline01 | BasicKernel::Bernstein1 => json!({}),
    };
    json!({ "family": k.family().name(), "params": params })
}

pub(super) fn from_value(value: &Value) -> Result<Kernel> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::param("kernel", "expected a JSON object"))?;
    if let Some(family) = obj.get("family") {
        basic_from_value(family, obj.get("params")).map(Kernel::Basic)
    } else if let Some(op) = obj.get("op") {
        composite_from_value(op, obj)
    } else {
        Err(Error::param(
            "family",
            "kernel object needs a `family` or an `op` field",
        ))
    }
}

fn params<T: DeserializeOwned>(family: Family, raw: &Value) -> Result<T> {
    serde_json::from_value(raw.clone())
        .map_err(|e| Error::param("params", format!("{family}: {e}")))
}

fn basic_from_value(family: &Value, raw: Option<&Value>) -> Result<BasicKernel> {
    let name = family
        .as_str()
        .ok_or_else(|| Error::param("family", "expected a string"))?;
    let family = Family::from_name(name)
        .ok_or_else(|| Error::param("family", format!("unknown kernel family `{name}`")))?;
    let empty = json!({});
    let raw = match raw {
        None | Some(Value::Null) => &empty,
        Some(v) => v,
    };
    if !raw.is_object() {
        return Err(Error::param("params", "expected a JSON object"));
    }
    match family {
        Family::Polynomial => {
            let p: PolynomialParams = params(family, raw)?;
            BasicKernel::polynomial(p.m, p.t0)
        }
        Family::Fourier => {
            let p: FourierParams = params(family, raw)?;
            BasicKernel::fourier(p.n_terms)
        }
        Family::Lagrange => {
            let p: LagrangeParams = params(family, raw)?;
            BasicKernel::lagrange(&p.nodes)
        }
        Family::Taylor => {
            let p: TaylorParams = params(family, raw)?;
            BasicKernel::taylor(p.n_terms, p.t0)
        }
        Family::OddSpline => Ok(BasicKernel::OddSpline(OddSplineKernel::new(params(
            family, raw,
        )?)?)),
        Family::H2Part => {
            let p: H2PartParams = params(family, raw)?;
            BasicKernel::h2(p.part, p.upper)
        }
        Family::Spline01 | Family::Bernstein1 => {
            if let Some(key) = raw.as_object().and_then(|m| m.keys().next()) {
                return Err(Error::param(
                    "params",
                    format!("{family} takes no parameters, got `{key}`"),
                ));
            }
            Ok(if family == Family::Spline01 {
                BasicKernel::Spline01
            } else {
                BasicKernel::Bernstein1
            })
        }
    }
}

fn composite_from_value(op: &Value, obj: &Map<String, Value>) -> Result<Kernel> {
    let name = op
        .as_str()
        .ok_or_else(|| Error::param("op", "expected a string"))?;
    let op = CompositeOp::from_name(name)
        .ok_or_else(|| Error::param("op", format!("unknown kernel operation `{name}`")))?;
    let args = obj
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::param("args", "expected an array of kernels"))?
        .iter()
        .map(from_value)
        .collect::<Result<Vec<_>>>()?;
    let number = |key: &'static str| -> Result<f64> {
        obj.get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::param(key, format!("`{}` needs a numeric `{key}`", op.name())))
    };
    let arity = op.arity();
    if args.len() != arity {
        return Err(Error::param(
            "args",
            format!("`{}` takes {arity} operand(s), got {}", op.name(), args.len()),
        ));
    }
    let mut args = args.into_iter();
    let mut next = || args.next().expect("arity checked");
    let composite = match op {
        CompositeOp::Scale => algebra::scale_kernel(number("lambda")?, next())?,
        CompositeOp::Sum => algebra::add_kernels(next(), next())?,
        CompositeOp::Tensor => algebra::tensor_kernel(next(), next()),
        CompositeOp::SchurProduct => algebra::schur_product(next(), next())?,
        CompositeOp::SecondDifference => algebra::second_difference_kernel(next(), number("h")?)?,
    };
    Ok(composite.into())
}
