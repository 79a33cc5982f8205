//! Oracles shared by the integration tests. Nothing here calls into the
//! solver paths it is used to check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sorted points in `[lo, hi]`, pairwise at least `gap` apart.
pub fn spread_nodes(rng: &mut impl Rng, n: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[1] - w[0] >= gap) {
            return xs;
        }
    }
}

/// Neville's scheme for the interpolating polynomial through `(xs, ys)` at `t`.
pub fn neville(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((t - xs[i + k]) * p[i] + (xs[i] - t) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

/// Minimizes `sum_i (f[i-1] - 2 f[i] + f[i+1])^2` over `n` equispaced values
/// with the entries in `fixed` held at the given values.
///
/// This is the piecewise-linear discretization of `int (f'')^2`; its normal
/// equations are pentadiagonal and solved by a banded Cholesky.
pub fn discrete_spline(n: usize, fixed: &[(usize, f64)]) -> Vec<f64> {
    let mut value = vec![0.0; n];
    let mut is_fixed = vec![false; n];
    for &(i, v) in fixed {
        value[i] = v;
        is_fixed[i] = true;
    }
    // A = D2^T D2 in band storage: a[i][k] = A[i][i + k], k = 0..=2
    let mut a = vec![[0.0f64; 3]; n];
    for r in 1..n - 1 {
        let idx = [r - 1, r, r + 1];
        let c = [1.0, -2.0, 1.0];
        for p in 0..3 {
            for q in p..3 {
                a[idx[p]][q - p] += c[p] * c[q];
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| !is_fixed[i]).collect();
    let m = free.len();
    // reduced system: band entries between free indices, rhs from fixed ones
    let entry = |i: usize, j: usize| -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        if hi - lo <= 2 {
            a[lo][hi - lo]
        } else {
            0.0
        }
    };
    let mut band = vec![[0.0f64; 3]; m];
    let mut rhs = vec![0.0; m];
    for (p, &i) in free.iter().enumerate() {
        for k in 0..3 {
            if p + k < m {
                band[p][k] = entry(i, free[p + k]);
            }
        }
        for j in i.saturating_sub(2)..(i + 3).min(n) {
            if is_fixed[j] {
                rhs[p] -= entry(i, j) * value[j];
            }
        }
    }
    // banded Cholesky, l[p][k] = L[p][p - k]
    let mut l = vec![[0.0f64; 3]; m];
    for p in 0..m {
        for k in (1..3).rev() {
            if p < k {
                continue;
            }
            let q = p - k;
            let mut s = band[q][k];
            for r in 1..3 {
                if k + r < 3 && q >= r {
                    s -= l[p][k + r] * l[q][r];
                }
            }
            l[p][k] = s / l[q][0];
        }
        let mut d = band[p][0];
        for k in 1..3 {
            if p >= k {
                d -= l[p][k] * l[p][k];
            }
        }
        assert!(d > 0.0, "discrete spline system not positive definite");
        l[p][0] = d.sqrt();
    }
    let mut y = rhs;
    for p in 0..m {
        for k in 1..3 {
            if p >= k {
                y[p] -= l[p][k] * y[p - k];
            }
        }
        y[p] /= l[p][0];
    }
    for p in (0..m).rev() {
        for k in 1..3 {
            if p + k < m {
                y[p] -= l[p + k][k] * y[p + k];
            }
        }
        y[p] /= l[p][0];
    }
    for (p, &i) in free.iter().enumerate() {
        value[i] = y[p];
    }
    value
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(g: &nalgebra::DMatrix<f64>) -> f64 {
    nalgebra::SymmetricEigen::new(g.clone()).eigenvalues.min()
}
