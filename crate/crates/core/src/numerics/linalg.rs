use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Diagonal shifts tried in order until the Cholesky factorization succeeds.
pub const DEFAULT_JITTER_SCHEDULE: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// Lower Cholesky factor of `G + jitter * I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub lower: DMatrix<f64>,
    pub jitter: f64,
}

/// Cholesky of `g + jitter * I`, returning the failing pivot index on breakdown.
///
/// A pivot counts as failed when it drops below `n * eps * max(diag)`, which
/// catches exactly singular PSD matrices whose pivots would otherwise be
/// rounding noise of either sign.
pub fn cholesky(g: &DMatrix<f64>, jitter: f64) -> Result<DMatrix<f64>, usize> {
    let n = g.nrows();
    let max_diag = (0..n)
        .map(|i| (g[(i, i)] + jitter).abs())
        .fold(0.0, f64::max);
    let floor = n as f64 * f64::EPSILON * max_diag;
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)] + jitter;
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > floor) || !d.is_finite() {
            return Err(j);
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut v = g[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / d;
        }
    }
    Ok(l)
}

impl Factorization {
    /// First entry of `schedule` for which `g + jitter * I` factorizes.
    pub fn new(g: &DMatrix<f64>, schedule: &[f64]) -> Result<Self> {
        let mut last_pivot = 0;
        for &jitter in schedule {
            match cholesky(g, jitter) {
                Ok(lower) => return Ok(Factorization { lower, jitter }),
                Err(p) => last_pivot = p,
            }
        }
        Err(Error::RankDeficient {
            pivot: last_pivot,
            jitter_cap: schedule.iter().copied().fold(0.0, f64::max),
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let l = &self.lower;
        let n = l.nrows();
        let mut y = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[(i, k)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[(k, i)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        y
    }
}

/// Solves `(G + j I) x = rhs` for the first `j` in `schedule` that factorizes.
pub fn factor_solve(g: &DMatrix<f64>, rhs: &[f64], schedule: &[f64]) -> Result<(Vec<f64>, f64)> {
    assert_eq!(g.nrows(), rhs.len(), "right-hand side length");
    let f = Factorization::new(g, schedule)?;
    Ok((f.solve(rhs), f.jitter))
}

/// `max_i |((G + jitter I) x - rhs)_i|`.
pub fn residual_inf(g: &DMatrix<f64>, x: &[f64], rhs: &[f64], jitter: f64) -> f64 {
    let xv = DVector::from_column_slice(x);
    let gx = g * &xv + jitter * &xv;
    gx.iter()
        .zip(rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_needs_no_jitter() {
        let g = DMatrix::identity(4, 4);
        let rhs = [1.0, -2.0, 3.5, 0.25];
        let (x, j) = factor_solve(&g, &rhs, &DEFAULT_JITTER_SCHEDULE).unwrap();
        assert_eq!(j, 0.0);
        assert_eq!(x, rhs);
    }

    #[test]
    fn singular_pair_needs_jitter() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(cholesky(&g, 0.0), Err(1));
        let (x, j) = factor_solve(&g, &[1.0, 1.0], &DEFAULT_JITTER_SCHEDULE).unwrap();
        assert!(j > 0.0);
        // (G + jI)^{-1} (1,1) = (1,1) / (2 + j)
        for xi in x {
            assert!((xi - 1.0 / (2.0 + j)).abs() < 1e-12);
        }
    }

    #[test]
    fn schedule_exhaustion_reports_pivot() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 2.0, 1.0]);
        match factor_solve(&g, &[0.0; 3], &DEFAULT_JITTER_SCHEDULE) {
            Err(Error::RankDeficient { pivot, jitter_cap }) => {
                assert_eq!(pivot, 2);
                assert_eq!(jitter_cap, 1e-8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_spd_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = DMatrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
            let g = &a * a.transpose() + DMatrix::identity(8, 8);
            let rhs: Vec<f64> = (0..8).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let (x, j) = factor_solve(&g, &rhs, &DEFAULT_JITTER_SCHEDULE).unwrap();
            assert_eq!(j, 0.0);
            let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(residual_inf(&g, &x, &rhs, j) <= 1e-10 * scale);
        }
    }

    #[test]
    fn factor_reproduces_matrix() {
        let g = DMatrix::from_row_slice(3, 3, &[4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0]);
        let f = Factorization::new(&g, &[0.0]).unwrap();
        let back = &f.lower * f.lower.transpose();
        assert!((back - g).abs().max() < 1e-14);
    }
}
