//! Python bindings: kernels, the minimum-norm solver, the classical schemes
//! and the verification studies.

use std::cell::RefCell;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rkhs_interp::algebra;
use rkhs_interp::numerics::{inner_product, KernelSection, SpaceSpec};
use rkhs_interp::schemes::{self, BilinearPatch, TestFunction};
use rkhs_interp::{Error, Functional, H2Component, Interpolant, InterpolationProblem, Kernel};

create_exception!(pyrkhs, RkhsError, PyException);
create_exception!(pyrkhs, DomainError, RkhsError);
create_exception!(pyrkhs, RankDeficientError, RkhsError);
create_exception!(pyrkhs, MembershipError, RkhsError);

/// Python exception class for a library error.
fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parameter { .. } | Error::Capability { .. } | Error::Json(_) => "ValueError",
        Error::Domain { .. } | Error::DomainMismatch(_) => "DomainError",
        Error::RankDeficient { .. } | Error::Infeasible(_) => "RankDeficientError",
        Error::Membership(_) => "MembershipError",
    }
}

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match error_kind(&e) {
        "ValueError" => PyValueError::new_err(msg),
        "DomainError" => DomainError::new_err(msg),
        "RankDeficientError" => RankDeficientError::new_err(msg),
        _ => MembershipError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for rkhs_interp::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn test_function(name: &str) -> PyResult<TestFunction> {
    TestFunction::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = TestFunction::ALL.iter().map(|f| f.name()).collect();
        PyValueError::new_err(format!("unknown test function `{name}`; known: {}", known.join(", ")))
    })
}

fn h2_part(name: &str) -> PyResult<H2Component> {
    match name {
        "K" | "k" => Ok(H2Component::K),
        "L" | "l" => Ok(H2Component::L),
        "H" | "h" => Ok(H2Component::H),
        _ => Err(PyValueError::new_err(format!("H2 part must be K, L or H, got `{name}`"))),
    }
}

/// A point on a one-dimensional or product domain.
#[derive(FromPyObject)]
enum Point {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Point {
    fn coords(self) -> Vec<f64> {
        match self {
            Point::Scalar(x) => vec![x],
            Point::Vector(v) => v,
        }
    }
}

/// A positive semidefinite kernel H(s, t).
#[pyclass(name = "Kernel", module = "pyrkhs", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKernel {
    inner: Kernel,
}

impl From<Kernel> for PyKernel {
    fn from(inner: Kernel) -> Self {
        PyKernel { inner }
    }
}

#[pymethods]
impl PyKernel {
    #[staticmethod]
    #[pyo3(signature = (m, t0 = 0.0))]
    fn polynomial(m: u32, t0: f64) -> PyResult<Self> {
        Ok(Kernel::polynomial(m, t0).py_err()?.into())
    }

    #[staticmethod]
    fn spline01() -> Self {
        Kernel::spline01().into()
    }

    #[staticmethod]
    #[pyo3(signature = (n_terms = 64))]
    fn fourier(n_terms: usize) -> PyResult<Self> {
        Ok(Kernel::fourier(n_terms).py_err()?.into())
    }

    #[staticmethod]
    fn lagrange(nodes: Vec<f64>) -> PyResult<Self> {
        Ok(Kernel::lagrange(&nodes).py_err()?.into())
    }

    #[staticmethod]
    #[pyo3(signature = (n_terms = 30, t0 = 0.0))]
    fn taylor(n_terms: usize, t0: f64) -> PyResult<Self> {
        Ok(Kernel::taylor(n_terms, t0).py_err()?.into())
    }

    #[staticmethod]
    fn bernstein1() -> Self {
        Kernel::bernstein1().into()
    }

    #[staticmethod]
    #[pyo3(signature = (m, thetas, interval = (0.0, 1.0)))]
    fn odd_spline(m: u32, thetas: Vec<f64>, interval: (f64, f64)) -> PyResult<Self> {
        Ok(Kernel::odd_spline(m, &thetas, interval).py_err()?.into())
    }

    /// `part` is "K", "L" or "H"; the kernel lives on `[0, upper]`.
    #[staticmethod]
    #[pyo3(signature = (part = "H", upper = 1.0))]
    fn h2(part: &str, upper: f64) -> PyResult<Self> {
        Ok(Kernel::h2_on(h2_part(part)?, upper).py_err()?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Kernel::from_json_str(text).py_err()?.into())
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, s: Point, t: Point) -> PyResult<f64> {
        self.inner.eval(&s.coords(), &t.coords()).py_err()
    }

    fn __call__(&self, s: Point, t: Point) -> PyResult<f64> {
        self.eval(s, t)
    }

    /// `d^a/ds^a d^b/dt^b H(s, t)` on a one-dimensional kernel.
    fn partial(&self, s: f64, t: f64, order_s: u32, order_t: u32) -> PyResult<f64> {
        self.inner.partial1(s, t, order_s, order_t).py_err()
    }

    /// Gram matrix of point evaluations at `nodes`, as a list of rows.
    fn gram(&self, nodes: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let g = self.inner.gram1(&nodes).py_err()?;
        Ok(g.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    fn scale(&self, factor: f64) -> PyResult<Self> {
        Ok(Kernel::from(algebra::scale_kernel(factor, self.inner.clone()).py_err()?).into())
    }

    fn add(&self, other: &PyKernel) -> PyResult<Self> {
        Ok(Kernel::from(algebra::add_kernels(self.inner.clone(), other.inner.clone()).py_err()?).into())
    }

    fn schur(&self, other: &PyKernel) -> PyResult<Self> {
        Ok(Kernel::from(algebra::schur_product(self.inner.clone(), other.inner.clone()).py_err()?).into())
    }

    fn tensor(&self, other: &PyKernel) -> Self {
        Kernel::from(algebra::tensor_kernel(self.inner.clone(), other.inner.clone())).into()
    }

    fn second_difference(&self, h: f64) -> PyResult<Self> {
        Ok(Kernel::from(algebra::second_difference_kernel(self.inner.clone(), h).py_err()?).into())
    }

    fn __add__(&self, other: &PyKernel) -> PyResult<Self> {
        self.add(other)
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", self.to_json())
    }
}

/// A point evaluation or derivative evaluation functional.
#[pyclass(name = "Functional", module = "pyrkhs", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunctional {
    inner: Functional,
}

#[pymethods]
impl PyFunctional {
    #[staticmethod]
    fn point(x: Point) -> Self {
        PyFunctional {
            inner: Functional::point_nd(&x.coords()),
        }
    }

    #[staticmethod]
    fn deriv(x: f64, order: u32) -> Self {
        PyFunctional {
            inner: Functional::deriv(x, order),
        }
    }

    fn __repr__(&self) -> String {
        let f = &self.inner;
        match f.order {
            0 => format!("Functional.point({:?})", f.point),
            k => format!("Functional.deriv({:?}, {k})", f.point[0]),
        }
    }
}

/// The minimum-norm interpolant of a solved problem.
#[pyclass(name = "Interpolant", module = "pyrkhs", frozen)]
struct PyInterpolant {
    inner: Interpolant,
}

impl From<Interpolant> for PyInterpolant {
    fn from(inner: Interpolant) -> Self {
        PyInterpolant { inner }
    }
}

#[pymethods]
impl PyInterpolant {
    fn eval(&self, t: Point) -> PyResult<f64> {
        self.inner.eval(&t.coords()).py_err()
    }

    fn __call__(&self, t: Point) -> PyResult<f64> {
        self.eval(t)
    }

    fn eval_many(&self, ts: Vec<f64>) -> PyResult<Vec<f64>> {
        ts.into_iter().map(|t| self.inner.eval1(t)).collect::<Result<_, _>>().py_err()
    }

    fn derivative(&self, t: f64, order: u32) -> PyResult<f64> {
        self.inner.eval_derivative(t, order).py_err()
    }

    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas().to_vec()
    }

    #[getter]
    fn jitter_used(&self) -> f64 {
        self.inner.jitter_used()
    }

    #[getter]
    fn norm_sq(&self) -> f64 {
        self.inner.norm_sq()
    }

    #[getter]
    fn kernel(&self) -> PyKernel {
        self.inner.kernel().clone().into()
    }

    /// Residual of every constraint.
    fn residuals(&self) -> PyResult<Vec<f64>> {
        self.inner.verify_constraints().py_err()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| to_py(e.into()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: Interpolant = serde_json::from_str(text).map_err(|e| to_py(e.into()))?;
        Ok(inner.into())
    }

    fn __repr__(&self) -> String {
        format!(
            "Interpolant(kernel={}, constraints={})",
            self.inner.kernel().name(),
            self.inner.lambdas().len()
        )
    }
}

/// Minimum-norm interpolant with `functional_j(sigma) = targets[j]`.
#[pyfunction]
fn fit(kernel: &PyKernel, functionals: Vec<PyFunctional>, targets: Vec<f64>) -> PyResult<PyInterpolant> {
    let fs = functionals.into_iter().map(|f| f.inner).collect();
    let p = InterpolationProblem::new(kernel.inner.clone(), fs, targets).py_err()?;
    Ok(rkhs_interp::solve_min_norm(&p).py_err()?.into())
}

/// [`fit`] with point evaluations at `xs`.
#[pyfunction]
fn fit_points(kernel: &PyKernel, xs: Vec<f64>, ys: Vec<f64>) -> PyResult<PyInterpolant> {
    let p = InterpolationProblem::points(kernel.inner.clone(), &xs, &ys).py_err()?;
    Ok(rkhs_interp::solve_min_norm(&p).py_err()?.into())
}

#[pyfunction]
fn lagrange_fit(nodes: Vec<f64>, values: Vec<f64>) -> PyResult<PyInterpolant> {
    Ok(schemes::lagrange_fit(&nodes, &values).py_err()?.into())
}

#[pyfunction]
#[pyo3(signature = (t0, derivatives, n_terms = None))]
fn taylor_fit(t0: f64, derivatives: Vec<f64>, n_terms: Option<usize>) -> PyResult<PyInterpolant> {
    let sigma = match n_terms {
        Some(n) => schemes::taylor_fit_with(t0, &derivatives, n),
        None => schemes::taylor_fit(t0, &derivatives),
    };
    Ok(sigma.py_err()?.into())
}

/// Bilinear patch through the corner values; evaluate with `sigma([s, t])`.
#[pyfunction]
fn bezier_bilinear_fit(a00: f64, a01: f64, a10: f64, a11: f64) -> PyResult<PyInterpolant> {
    let patch = BilinearPatch::new(a00, a01, a10, a11);
    Ok(schemes::bezier_bilinear_fit(&patch).py_err()?.into())
}

#[pyfunction]
#[pyo3(signature = (m, thetas, nodes, values, interval = (0.0, 1.0)))]
fn odd_spline_fit(
    m: u32,
    thetas: Vec<f64>,
    nodes: Vec<f64>,
    values: Vec<f64>,
    interval: (f64, f64),
) -> PyResult<PyInterpolant> {
    Ok(schemes::odd_spline_fit(m, &thetas, &nodes, &values, interval).py_err()?.into())
}

/// `(lhs, rhs, error)` of the Peano form of Taylor's theorem for a named function.
#[pyfunction]
fn peano_identity_check(f: &str, t: f64) -> PyResult<(f64, f64, f64)> {
    let c = schemes::peano_identity_check(&test_function(f)?, t).py_err()?;
    Ok((c.lhs, c.rhs, c.error))
}

/// Rows `(h, t, approx, target, abs_error)`; `f` is a test-function name or a callable.
#[pyfunction]
#[pyo3(signature = (f, t = 0.5, h_list = vec![0.2, 0.1, 0.05, 0.025]))]
fn dirac_convergence_study(
    f: &Bound<'_, PyAny>,
    t: f64,
    h_list: Vec<f64>,
) -> PyResult<Vec<(f64, f64, f64, f64, f64)>> {
    let rows = if let Ok(name) = f.extract::<String>() {
        let tf = test_function(&name)?;
        schemes::dirac_convergence_study(|s| tf.eval(s), t, &h_list).py_err()?
    } else {
        let failure: RefCell<Option<PyErr>> = RefCell::new(None);
        let call = |s: f64| match f.call1((s,)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };
        let rows = schemes::dirac_convergence_study(call, t, &h_list);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        rows.py_err()?
    };
    Ok(rows
        .into_iter()
        .map(|r| (r.h, r.t, r.approx, r.target, r.abs_error))
        .collect())
}

/// `(f(t), <f, H(., t)>)` in the space of `kernel` for a named test function.
#[pyfunction]
fn reproduce(kernel: &PyKernel, f: &str, t: f64) -> PyResult<(f64, f64)> {
    let k = &kernel.inner;
    let space = match k {
        Kernel::Basic(b) => match b.family() {
            rkhs_interp::Family::Spline01 => SpaceSpec::H1Zero0,
            rkhs_interp::Family::Fourier => SpaceSpec::Fourier02,
            rkhs_interp::Family::H2Part => SpaceSpec::H2Mixed,
            _ => return Err(PyValueError::new_err(format!("no scalar product known for {}", k.name()))),
        },
        _ => return Err(PyValueError::new_err(format!("no scalar product known for {}", k.name()))),
    };
    let tf = test_function(f)?;
    let section = KernelSection { kernel: k, t };
    let inner = inner_product(&space, &tf, &section).py_err()?;
    Ok((tf.eval(t), inner))
}

#[pymodule]
fn pyrkhs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("RkhsError", py.get_type::<RkhsError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("RankDeficientError", py.get_type::<RankDeficientError>())?;
    m.add("MembershipError", py.get_type::<MembershipError>())?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyFunctional>()?;
    m.add_class::<PyInterpolant>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(fit_points, m)?)?;
    m.add_function(wrap_pyfunction!(lagrange_fit, m)?)?;
    m.add_function(wrap_pyfunction!(taylor_fit, m)?)?;
    m.add_function(wrap_pyfunction!(bezier_bilinear_fit, m)?)?;
    m.add_function(wrap_pyfunction!(odd_spline_fit, m)?)?;
    m.add_function(wrap_pyfunction!(peano_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_convergence_study, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_exception_classes() {
        let cases = [
            (Error::Domain { point: 2.0, lo: 0.0, hi: 1.0 }, "DomainError"),
            (Error::RankDeficient { pivot: 1, jitter_cap: 1e-8 }, "RankDeficientError"),
            (Error::Infeasible("x".into()), "RankDeficientError"),
            (Error::Membership("x".into()), "MembershipError"),
            (
                Error::Capability { kernel: "Lagrange".into(), order_s: 1, order_t: 0 },
                "ValueError",
            ),
        ];
        for (e, kind) in cases {
            assert_eq!(error_kind(&e), kind);
        }
    }

    #[test]
    fn points_flatten() {
        assert_eq!(Point::Scalar(0.5).coords(), vec![0.5]);
        assert_eq!(Point::Vector(vec![0.1, 0.2]).coords(), vec![0.1, 0.2]);
    }
}
