//! Minimum-norm interpolation: find the smallest `f` in the space of a kernel
//! subject to finitely many linear constraints `<k_j | f> = alpha_j`.
//!
//! The solution is a combination of the constraint representers,
//! `sigma(t) = sum_j lambda_j <k_j | H(., t)>`, with `lambda` solving the
//! Gram system `G lambda = alpha`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::numerics::{Factorization, DEFAULT_JITTER_SCHEDULE};

/// Largest accepted relative constraint residual after a (possibly jittered) solve.
pub const RESIDUAL_CAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalKind {
    #[serde(rename = "point", alias = "PointEval")]
    PointEval,
    #[serde(rename = "deriv", alias = "DerivEval")]
    DerivEval,
}

/// A continuous linear functional: `f -> f(p)` or `f -> f^(order)(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub kind: FunctionalKind,
    pub point: Vec<f64>,
    pub order: u32,
}

impl Functional {
    pub fn point(x: f64) -> Self {
        Functional {
            kind: FunctionalKind::PointEval,
            point: vec![x],
            order: 0,
        }
    }

    /// Point evaluation on a product domain.
    pub fn point_nd(p: &[f64]) -> Self {
        Functional {
            kind: FunctionalKind::PointEval,
            point: p.to_vec(),
            order: 0,
        }
    }

    pub fn deriv(x: f64, order: u32) -> Self {
        Functional {
            kind: FunctionalKind::DerivEval,
            point: vec![x],
            order,
        }
    }

    fn derivative_order(&self) -> u32 {
        match self.kind {
            FunctionalKind::PointEval => 0,
            FunctionalKind::DerivEval => self.order,
        }
    }

    fn canonical_cmp(&self, other: &Functional) -> std::cmp::Ordering {
        self.derivative_order().cmp(&other.derivative_order()).then_with(|| {
            self.point
                .iter()
                .zip(&other.point)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or_else(|| self.point.len().cmp(&other.point.len()))
        })
    }

    fn same_as(&self, other: &Functional) -> bool {
        self.derivative_order() == other.derivative_order() && self.point == other.point
    }
}

/// The representer of `f` evaluated at `t`, i.e. `f` applied to `H(., t)`.
pub fn apply_functional_to_kernel(f: &Functional, k: &Kernel, t: &[f64]) -> Result<f64> {
    Ok(k.eval_partial(&f.point, t, f.derivative_order(), 0)?.value)
}

/// `f_i` applied in the first slot and `f_j` in the second.
fn bi_apply(k: &Kernel, fi: &Functional, fj: &Functional) -> Result<f64> {
    Ok(k
        .eval_partial(&fi.point, &fj.point, fi.derivative_order(), fj.derivative_order())?
        .value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem {
    kernel: Kernel,
    functionals: Vec<Functional>,
    targets: Vec<f64>,
}

impl InterpolationProblem {
    pub fn new(kernel: Kernel, functionals: Vec<Functional>, targets: Vec<f64>) -> Result<Self> {
        if functionals.len() != targets.len() {
            return Err(Error::param(
                "targets",
                format!(
                    "{} functionals but {} targets",
                    functionals.len(),
                    targets.len()
                ),
            ));
        }
        if let Some(a) = targets.iter().find(|a| !a.is_finite()) {
            return Err(Error::param("targets", format!("non-finite target {a}")));
        }
        for (i, fi) in functionals.iter().enumerate() {
            if fi.kind == FunctionalKind::PointEval && fi.order != 0 {
                return Err(Error::param("order", "point evaluation takes no order"));
            }
            if let Some(j) = functionals[..i].iter().position(|fj| fj.same_as(fi)) {
                return Err(Error::param(
                    "constraints",
                    format!("constraints {j} and {i} are the same functional"),
                ));
            }
        }
        Ok(InterpolationProblem {
            kernel,
            functionals,
            targets,
        })
    }

    /// Point-evaluation constraints `f(x_j) = y_j` on a one-dimensional kernel.
    pub fn points(kernel: Kernel, xs: &[f64], ys: &[f64]) -> Result<Self> {
        Self::new(kernel, xs.iter().map(|&x| Functional::point(x)).collect(), ys.to_vec())
    }

    // constraint indices sorted by functional; solving and summing in this
    // order makes results independent of how the caller listed them
    fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| self.functionals[i].canonical_cmp(&self.functionals[j]));
        order
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Same constraints with different targets.
    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Self> {
        Self::new(self.kernel.clone(), self.functionals.clone(), targets)
    }
}

/// `G_ij = <k_i | k_j>`, with optional Cholesky factor of `G + jitter_used I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub jitter_used: f64,
    pub factorization: Option<DMatrix<f64>>,
}

pub fn assemble_gram(p: &InterpolationProblem) -> Result<GramMatrix> {
    let n = p.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = bi_apply(&p.kernel, &p.functionals[i], &p.functionals[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(GramMatrix {
        entries: g,
        jitter_used: 0.0,
        factorization: None,
    })
}

impl GramMatrix {
    pub fn factorize(&mut self, schedule: &[f64]) -> Result<()> {
        let f = Factorization::new(&self.entries, schedule)?;
        self.jitter_used = f.jitter;
        self.factorization = Some(f.lower);
        Ok(())
    }
}

/// The minimum-norm interpolant `sigma = sum_j lambda_j k_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    problem: InterpolationProblem,
    lambdas: Vec<f64>,
    jitter_used: f64,
    order: Vec<usize>,
}

pub fn solve_min_norm(p: &InterpolationProblem) -> Result<Interpolant> {
    solve_min_norm_with(p, &DEFAULT_JITTER_SCHEDULE)
}

/// Solves with an explicit jitter schedule.
///
/// A jitter level is accepted when `G + jI` factorizes and the resulting
/// coefficients meet every constraint to `RESIDUAL_CAP * max(1, |alpha_j|)`.
/// When no level qualifies the functionals are not free (or a target sits
/// on a point where every element of the space vanishes) and the index of
/// the failing pivot or constraint is reported.
pub fn solve_min_norm_with(p: &InterpolationProblem, schedule: &[f64]) -> Result<Interpolant> {
    let order = p.canonical_order();
    let sorted = InterpolationProblem {
        kernel: p.kernel.clone(),
        functionals: order.iter().map(|&i| p.functionals[i].clone()).collect(),
        targets: order.iter().map(|&i| p.targets[i]).collect(),
    };
    let gram = assemble_gram(&sorted)?;
    let cap = schedule.iter().copied().fold(0.0, f64::max);
    let mut failure = 0;
    for &jitter in schedule {
        let f = match crate::numerics::cholesky(&gram.entries, jitter) {
            Ok(lower) => Factorization { lower, jitter },
            Err(pivot) => {
                failure = pivot;
                continue;
            }
        };
        let solved = f.solve(&sorted.targets);
        let worst = worst_residual(&gram.entries, &solved, &sorted.targets);
        match worst {
            Some((i, r)) if r > RESIDUAL_CAP => failure = i,
            _ => {
                let mut lambdas = vec![0.0; solved.len()];
                for (&i, l) in order.iter().zip(solved) {
                    lambdas[i] = l;
                }
                return Ok(Interpolant {
                    problem: p.clone(),
                    lambdas,
                    jitter_used: jitter,
                    order,
                });
            }
        }
    }
    Err(Error::RankDeficient {
        pivot: order.get(failure).copied().unwrap_or(failure),
        jitter_cap: cap,
    })
}

// index and size of the largest relative residual of G lambda = alpha
fn worst_residual(g: &DMatrix<f64>, lambdas: &[f64], targets: &[f64]) -> Option<(usize, f64)> {
    (0..targets.len())
        .map(|i| {
            let gl: f64 = (0..lambdas.len()).map(|j| g[(i, j)] * lambdas[j]).sum();
            let r = (gl - targets[i]).abs() / targets[i].abs().max(1.0);
            (i, if r.is_nan() { f64::INFINITY } else { r })
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

impl Interpolant {
    /// Rebuilds an interpolant from stored coefficients without solving.
    pub fn from_parts(problem: InterpolationProblem, lambdas: Vec<f64>, jitter_used: f64) -> Result<Self> {
        if lambdas.len() != problem.len() {
            return Err(Error::param(
                "lambdas",
                format!("{} coefficients for {} constraints", lambdas.len(), problem.len()),
            ));
        }
        let order = problem.canonical_order();
        Ok(Interpolant {
            problem,
            lambdas,
            jitter_used,
            order,
        })
    }

    pub fn problem(&self) -> &InterpolationProblem {
        &self.problem
    }

    pub fn kernel(&self) -> &Kernel {
        &self.problem.kernel
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn jitter_used(&self) -> f64 {
        self.jitter_used
    }

    // (functional, coefficient) pairs in canonical order
    fn terms(&self) -> impl Iterator<Item = (&Functional, f64)> {
        self.order
            .iter()
            .map(|&i| (&self.problem.functionals[i], self.lambdas[i]))
    }

    /// `sigma(t) = sum_j lambda_j <k_j | H(., t)>`.
    pub fn eval(&self, t: &[f64]) -> Result<f64> {
        let k = &self.problem.kernel;
        k.domain().check(t)?;
        self.terms()
            .try_fold(0.0, |acc, (f, l)| Ok(acc + l * apply_functional_to_kernel(f, k, t)?))
    }

    pub fn eval1(&self, t: f64) -> Result<f64> {
        self.eval(&[t])
    }

    /// `sigma^(order)(t)`, for kernels with the needed partials in the second slot.
    pub fn eval_derivative(&self, t: f64, order: u32) -> Result<f64> {
        let k = &self.problem.kernel;
        self.terms().try_fold(0.0, |acc, (f, l)| {
                Ok(acc + l * k.eval_partial(&f.point, &[t], f.derivative_order(), order)?.value)
            })
    }

    /// `||sigma||^2 = lambda^T G lambda`, which equals `lambda^T alpha`.
    pub fn norm_sq(&self) -> f64 {
        self.order
            .iter()
            .map(|&i| self.lambdas[i] * self.problem.targets[i])
            .sum::<f64>()
            .max(0.0)
    }

    /// `(k_j applied to sigma) - alpha_j` for every constraint.
    pub fn verify_constraints(&self) -> Result<Vec<f64>> {
        let k = &self.problem.kernel;
        let fs = &self.problem.functionals;
        fs.iter()
            .zip(&self.problem.targets)
            .map(|(fi, a)| {
                let v = self
                    .terms()
                    .try_fold(0.0, |acc, (fj, l)| Ok::<_, Error>(acc + l * bi_apply(k, fj, fi)?))?;
                Ok(v - a)
            })
            .collect()
    }
}

// JSON forms

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointJson {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintJson {
    kind: FunctionalKind,
    point: PointJson,
    #[serde(default, skip_serializing_if = "is_zero")]
    order: u32,
    target: f64,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    kernel: Kernel,
    constraints: Vec<ConstraintJson>,
}

#[derive(Serialize, Deserialize)]
struct InterpolantJson {
    problem: ProblemJson,
    lambdas: Vec<f64>,
    #[serde(default)]
    jitter_used: f64,
}

fn constraints_to_json(p: &InterpolationProblem) -> Vec<ConstraintJson> {
    p.functionals
        .iter()
        .zip(&p.targets)
        .map(|(f, &target)| ConstraintJson {
            kind: f.kind,
            point: match f.point.as_slice() {
                [x] => PointJson::Scalar(*x),
                xs => PointJson::Vector(xs.to_vec()),
            },
            order: f.order,
            target,
        })
        .collect()
}

fn problem_from_json(p: ProblemJson) -> Result<InterpolationProblem> {
    let (functionals, targets) = p
        .constraints
        .into_iter()
        .map(|c| {
            let point = match c.point {
                PointJson::Scalar(x) => vec![x],
                PointJson::Vector(v) => v,
            };
            (
                Functional {
                    kind: c.kind,
                    point,
                    order: c.order,
                },
                c.target,
            )
        })
        .unzip();
    InterpolationProblem::new(p.kernel, functionals, targets)
}

/// Parses a constraint list (`[{"kind","point","order","target"}, ...]`).
pub fn constraints_from_json(kernel: Kernel, value: serde_json::Value) -> Result<InterpolationProblem> {
    let constraints: Vec<ConstraintJson> = serde_json::from_value(value)?;
    problem_from_json(ProblemJson { kernel, constraints })
}

impl Serialize for InterpolationProblem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProblemJson {
            kernel: self.kernel.clone(),
            constraints: constraints_to_json(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InterpolationProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        problem_from_json(ProblemJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Interpolant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InterpolantJson {
            problem: ProblemJson {
                kernel: self.problem.kernel.clone(),
                constraints: constraints_to_json(&self.problem),
            },
            lambdas: self.lambdas.clone(),
            jitter_used: self.jitter_used,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interpolant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = InterpolantJson::deserialize(d)?;
        let problem = problem_from_json(raw.problem).map_err(serde::de::Error::custom)?;
        Interpolant::from_parts(problem, raw.lambdas, raw.jitter_used).map_err(serde::de::Error::custom)
    }
}
