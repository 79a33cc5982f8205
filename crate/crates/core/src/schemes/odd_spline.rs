use crate::engine::{solve_min_norm, Interpolant, InterpolationProblem};
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Odd-degree (2m-1) polynomial spline through `(nodes[j], values[j])`.
///
/// The solution lives in `{f : f(theta_j) = 0}` and minimizes
/// `int_a^b (f^(m))^2` there, so it vanishes on every theta node. A data
/// node placed on a theta node is only feasible with target 0.
pub fn odd_spline_fit(
    m: u32,
    thetas: &[f64],
    nodes: &[f64],
    values: &[f64],
    interval: (f64, f64),
) -> Result<Interpolant> {
    let kernel = Kernel::odd_spline(m, thetas, interval)?;
    if nodes.len() != values.len() {
        return Err(Error::param(
            "values",
            format!("{} nodes but {} values", nodes.len(), values.len()),
        ));
    }
    if nodes.len() < m as usize + 2 {
        return Err(Error::param(
            "nodes",
            format!(
                "need more than m + 1 = {} nodes, got {}",
                m + 1,
                nodes.len()
            ),
        ));
    }
    if let Some(w) = nodes.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::param(
            "nodes",
            format!("must be strictly increasing ({} >= {})", w[0], w[1]),
        ));
    }
    for (&x, &y) in nodes.iter().zip(values) {
        if let Some(th) = thetas.iter().find(|&&th| th == x) {
            if y != 0.0 {
                return Err(Error::Infeasible(format!(
                    "node {x} coincides with theta node {th}, where every spline vanishes, but target is {y}"
                )));
            }
        }
    }
    solve_min_norm(&InterpolationProblem::points(kernel, nodes, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const THETAS: [f64; 2] = [0.1, 0.9];
    const NODES: [f64; 6] = [0.2, 0.3, 0.45, 0.6, 0.7, 0.85];

    #[test]
    fn zero_data_gives_zero() {
        let s = odd_spline_fit(2, &THETAS, &NODES, &[0.0; 6], (0.0, 1.0)).unwrap();
        for t in [0.0, 0.33, 1.0] {
            assert_eq!(s.eval1(t).unwrap(), 0.0);
        }
    }

    #[test]
    fn vanishes_on_thetas() {
        let values = [1.0, -0.5, 2.0, 0.3, -1.0, 0.8];
        for m in [2u32, 3] {
            let thetas: Vec<f64> = if m == 2 { THETAS.to_vec() } else { vec![0.05, 0.5, 0.95] };
            let nodes: Vec<f64> = NODES.iter().copied().filter(|x| !thetas.contains(x)).collect();
            let s = odd_spline_fit(m, &thetas, &nodes, &values[..nodes.len()], (0.0, 1.0)).unwrap();
            for &th in &thetas {
                assert_abs_diff_eq!(s.eval1(th).unwrap(), 0.0, epsilon = 1e-12);
            }
            for (x, y) in nodes.iter().zip(&values) {
                assert_abs_diff_eq!(s.eval1(*x).unwrap(), *y, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn collision_with_theta() {
        let nodes = [0.1, 0.3, 0.45, 0.6, 0.7, 0.85];
        let err = odd_spline_fit(2, &THETAS, &nodes, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], (0.0, 1.0));
        assert!(matches!(err, Err(Error::Infeasible(_))));
        let ok = odd_spline_fit(2, &THETAS, &nodes, &[0.0, 1.0, 0.0, 0.0, 0.0, 2.0], (0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(ok.eval1(0.3).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn needs_more_than_m_plus_one_nodes() {
        let err = odd_spline_fit(2, &THETAS, &[0.3, 0.5, 0.7], &[1.0, 2.0, 3.0], (0.0, 1.0));
        assert!(matches!(err, Err(Error::Parameter { name: "nodes", .. })));
    }

    #[test]
    fn cubic_spline_is_affine_outside_the_knots() {
        let values = [1.0, -0.5, 2.0, 0.3, -1.0, 0.8];
        let s = odd_spline_fit(2, &THETAS, &NODES, &values, (0.0, 1.0)).unwrap();
        // beyond the outermost knots (theta nodes here) second differences vanish
        for x in [0.02, 0.05, 0.95, 0.97] {
            let d2 = crate::numerics::finite_diff(|t| s.eval1(t).unwrap(), x, 2, 0.01);
            assert_abs_diff_eq!(d2, 0.0, epsilon = 1e-7);
        }
    }
}
