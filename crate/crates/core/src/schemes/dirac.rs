//! The Peano-kernel form of Taylor's theorem and the B-spline kernels
//! `L_h = D_h^2 (x) D_h^2 L` converging to point evaluation.

use std::cell::RefCell;

use serde::Serialize;

use crate::algebra::second_difference_kernel;
use crate::error::{Error, Result};
use crate::kernel::{H2Component, Kernel};
use crate::numerics::{integrate, Differentiable, QuadratureRule};

pub const DEFAULT_DIRAC_STEPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeanoCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
}

/// Compares `f(t)` with `f(0) + t f'(0) + int_0^1 (t - s)_+ f''(s) ds`.
///
/// The Peano kernel is taken from the kernel itself as `d^2/ds^2 L(t, s)`.
pub fn peano_identity_check(f: &dyn Differentiable, t: f64) -> Result<PeanoCheck> {
    peano_identity_check_with(f, t, &QuadratureRule::default())
}

pub fn peano_identity_check_with(
    f: &dyn Differentiable,
    t: f64,
    rule: &QuadratureRule,
) -> Result<PeanoCheck> {
    let l = Kernel::h2(H2Component::L);
    l.domain().check(&[t])?;
    let rule = rule.clone().with_splits([t]);
    let integral = integrate(
        |s| l.partial1(t, s, 0, 2).unwrap_or(f64::NAN) * f.derivative(s, 2),
        0.0,
        1.0,
        &rule,
    );
    let lhs = f.value(t);
    let rhs = f.value(0.0) + t * f.derivative(0.0, 1) + integral;
    Ok(PeanoCheck {
        lhs,
        rhs,
        error: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracStudyRow {
    pub h: f64,
    pub t: f64,
    /// `int_0^1 L_h(s, t) f(s) ds`
    pub approx: f64,
    pub target: f64,
    pub abs_error: f64,
}

/// `int_0^1 L_h(s, t) f(s) ds` against `f(t)` for each step, largest step first.
pub fn dirac_convergence_study(
    f: impl Fn(f64) -> f64,
    t: f64,
    h_list: &[f64],
) -> Result<Vec<DiracStudyRow>> {
    dirac_convergence_study_with(f, t, h_list, &QuadratureRule::default())
}

pub fn dirac_convergence_study_with(
    f: impl Fn(f64) -> f64,
    t: f64,
    h_list: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<DiracStudyRow>> {
    if h_list.is_empty() {
        return Err(Error::param("h_list", "needs at least one step"));
    }
    if let Some(h) = h_list.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::param("h_list", format!("steps must be > 0, got {h}")));
    }
    let mut steps = h_list.to_vec();
    steps.sort_by(|a, b| b.total_cmp(a));
    steps.dedup();
    let h_max = steps[0];
    // the support of L_h(., t) is (t - 2h, t + 2h)
    if !(t - 2.0 * h_max > 0.0 && t + 2.0 * h_max < 1.0) {
        return Err(Error::Domain {
            point: t,
            lo: 2.0 * h_max,
            hi: 1.0 - 2.0 * h_max,
        });
    }
    // forward differences sample L up to s + 2h; L has the same closed form
    // on any [0, T], so take T = 1 + 2 h_max
    let l = Kernel::h2_on(H2Component::L, 1.0 + 2.0 * h_max)?;
    let target = f(t);
    steps
        .into_iter()
        .map(|h| {
            let lh: Kernel = second_difference_kernel(l.clone(), h)?.into();
            let rule = rule
                .clone()
                .with_splits((-2..=2).map(|k| t + f64::from(k) * h));
            let failure = RefCell::new(None);
            let approx = integrate(
                |s| match lh.eval1(s, t) {
                    Ok(v) => v * f(s),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                1.0,
                &rule,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok(DiracStudyRow {
                h,
                t,
                approx,
                target,
                abs_error: (approx - target).abs(),
            })
        })
        .collect()
}
