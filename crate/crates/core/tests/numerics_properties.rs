use nalgebra::DMatrix;
use proptest::prelude::*;

use rkhs_interp::numerics::{
    factor_solve, inner_product, integrate, residual_inf, FnDerivs, QuadratureRule, SpaceSpec,
    DEFAULT_JITTER_SCHEDULE,
};

fn spd(n: usize, entries: &[f64]) -> DMatrix<f64> {
    let a = DMatrix::from_column_slice(n, n, &entries[..n * n]);
    &a * a.transpose() + DMatrix::identity(n, n)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_solve_residual_is_small(
        n in 1usize..=12,
        entries in prop::collection::vec(-1.0..1.0f64, 144),
        rhs in prop::collection::vec(-10.0..10.0f64, 12),
    ) {
        let g = spd(n, &entries);
        let rhs = &rhs[..n];
        let (x, jitter) = factor_solve(&g, rhs, &DEFAULT_JITTER_SCHEDULE).unwrap();
        prop_assert_eq!(jitter, 0.0);
        prop_assert!(residual_inf(&g, &x, rhs, jitter) <= 1e-10 * inf_norm(rhs));
    }

    #[test]
    fn consistent_singular_systems_are_solved_with_jitter(
        n in 2usize..=8,
        rank in 1usize..=7,
        entries in prop::collection::vec(-1.0..1.0f64, 64),
        y in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        // G = A A^T with A of shape n x rank, rank < n, and rhs = G y in its range;
        // an rhs with a null-space part has |x| ~ |rhs| / jitter, far past what
        // a 1e-10 residual allows in double precision
        let rank = rank.min(n - 1);
        let a = DMatrix::from_column_slice(n, rank, &entries[..n * rank]);
        let g = &a * a.transpose();
        let rhs: Vec<f64> = (&g * nalgebra::DVector::from_column_slice(&y[..n])).iter().copied().collect();
        prop_assume!(inf_norm(&rhs) > 1e-3);
        let (x, jitter) = factor_solve(&g, &rhs, &DEFAULT_JITTER_SCHEDULE).unwrap();
        prop_assert!(residual_inf(&g, &x, &rhs, jitter) <= 1e-10 * inf_norm(&rhs));
    }

    #[test]
    fn simpson_error_drops_eightfold_when_panels_double(
        a in 0.5..3.0f64,
        lo in -1.0..0.0f64,
        len in 0.5..2.0f64,
        panels in 2usize..40,
    ) {
        // int e^{a s} over [lo, hi]; the leading error term a^3 (e^{a hi} - e^{a lo}) never vanishes
        let hi = lo + len;
        let exact = ((a * hi).exp() - (a * lo).exp()) / a;
        let err = |n| (integrate(|s| (a * s).exp(), lo, hi, &QuadratureRule::simpson(n)) - exact).abs();
        let (coarse, fine) = (err(panels), err(2 * panels));
        prop_assume!(coarse > 1e-12);
        prop_assert!(coarse >= 8.0 * fine, "{coarse:e} -> {fine:e}");
    }

    #[test]
    fn split_points_do_not_change_smooth_integrals(
        a in -2.0..2.0f64,
        splits in prop::collection::vec(0.0..1.0f64, 0..4),
    ) {
        let rule = QuadratureRule::default().with_splits(splits);
        let exact = if a == 0.0 { 1.0 } else { (a.exp() - 1.0) / a };
        prop_assert!((integrate(|s| (a * s).exp(), 0.0, 1.0, &rule) - exact).abs() <= 1e-11);
    }

    #[test]
    fn kinked_integrands_are_exact_with_splits(c in 0.05..0.95f64, p in 1i32..=3) {
        // int_0^1 (c - s)_+^p = c^(p+1) / (p+1), a polynomial on each side of the split
        let rule = QuadratureRule::simpson(10).with_splits([c]);
        let got = integrate(|s| (c - s).max(0.0).powi(p), 0.0, 1.0, &rule);
        prop_assert!((got - c.powi(p + 1) / f64::from(p + 1)).abs() <= 1e-14);
    }
}

// random members of each space with analytic derivatives up to order two

fn h1_member(c: [f64; 3]) -> FnDerivs<'static> {
    // sum_k c_k sin(k s) vanishes at 0
    FnDerivs::new(move |s| (1..=3).map(|k| c[k - 1] * (k as f64 * s).sin()).sum())
        .then(move |s| (1..=3).map(|k| c[k - 1] * k as f64 * (k as f64 * s).cos()).sum())
}

fn fourier_member(c: [f64; 3]) -> FnDerivs<'static> {
    use std::f64::consts::PI;
    // cos(pi s), sin(pi s), cos(2 pi s): periodic on [0, 2] with mean zero
    FnDerivs::new(move |s| c[0] * (PI * s).cos() + c[1] * (PI * s).sin() + c[2] * (2.0 * PI * s).cos())
        .then(move |s| {
            PI * (-c[0] * (PI * s).sin() + c[1] * (PI * s).cos() - 2.0 * c[2] * (2.0 * PI * s).sin())
        })
}

fn h2_member(c: [f64; 3]) -> FnDerivs<'static> {
    FnDerivs::new(move |s| c[0] + c[1] * s + c[2] * s.exp())
        .then(move |s| c[1] + c[2] * s.exp())
        .then(move |s| c[2] * s.exp())
}

fn theta_member(c: [f64; 3]) -> FnDerivs<'static> {
    // (s - 0.1)(s - 0.9) q(s), q(s) = c0 + c1 s + c2 s^2; expanded as sum_k e_k s^k
    let e = [
        0.09 * c[0],
        0.09 * c[1] - c[0],
        0.09 * c[2] - c[1] + c[0],
        c[1] - c[2],
        c[2],
    ];
    let poly = move |d: usize| {
        move |s: f64| {
            (d..5)
                .map(|k| {
                    let fall: f64 = (k - d + 1..=k).map(|j| j as f64).product();
                    e[k] * fall * s.powi((k - d) as i32)
                })
                .sum::<f64>()
        }
    };
    FnDerivs::new(poly(0)).then(poly(1)).then(poly(2))
}

fn spaces() -> Vec<(SpaceSpec, fn([f64; 3]) -> FnDerivs<'static>)> {
    vec![
        (SpaceSpec::H1Zero0, h1_member),
        (SpaceSpec::Fourier02, fourier_member),
        (SpaceSpec::H2Mixed, h2_member),
        (
            SpaceSpec::HmTheta { m: 2, thetas: vec![0.1, 0.9], interval: (0.0, 1.0) },
            theta_member,
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn squared_norms_are_nonnegative(c in prop::array::uniform3(-3.0..3.0f64)) {
        for (space, member) in spaces() {
            let f = member(c);
            let norm = inner_product(&space, &f, &f).unwrap();
            prop_assert!(norm >= 0.0, "{space:?}: {norm}");
        }
    }

    #[test]
    fn inner_products_are_symmetric(a in prop::array::uniform3(-3.0..3.0f64), b in prop::array::uniform3(-3.0..3.0f64)) {
        for (space, member) in spaces() {
            let (f, g) = (member(a), member(b));
            let fg = inner_product(&space, &f, &g).unwrap();
            let gf = inner_product(&space, &g, &f).unwrap();
            prop_assert!((fg - gf).abs() <= 1e-12 * (1.0 + fg.abs()));
        }
    }
}

#[test]
fn zero_has_zero_norm_in_every_space() {
    for (space, member) in spaces() {
        let z = member([0.0; 3]);
        assert_eq!(inner_product(&space, &z, &z).unwrap(), 0.0, "{space:?}");
    }
}

#[test]
fn nonzero_members_have_positive_norm() {
    for (space, member) in spaces() {
        let f = member([1.0, -0.5, 0.25]);
        assert!(inner_product(&space, &f, &f).unwrap() > 1e-3, "{space:?}");
    }
}
