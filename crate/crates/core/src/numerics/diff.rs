/// Central-difference estimate of `f^(order)(t)` with step `h`.
///
/// Orders 1 and 2 use the usual three-point stencils on `t - h, t, t + h`.
/// Higher orders use the central difference `delta^n` with half-step
/// offsets `(n/2 - k) h`, which stays inside `t +- order * h` and is exact
/// for polynomials of degree `order + 1`.
pub fn finite_diff<F: Fn(f64) -> f64>(f: F, t: f64, order: u32, h: f64) -> f64 {
    match order {
        0 => f(t),
        1 => (f(t + h) - f(t - h)) / (2.0 * h),
        2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
        n => {
            let mut binom = 1.0;
            let mut acc = 0.0;
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let offset = (f64::from(n) / 2.0 - f64::from(k)) * h;
                acc += sign * binom * f(t + offset);
                binom = binom * f64::from(n - k) / f64::from(k + 1);
            }
            acc / h.powi(n as i32)
        }
    }
}

/// Step balancing truncation against rounding for a smooth `f` of unit scale.
pub fn default_step(order: u32) -> f64 {
    f64::EPSILON.powf(1.0 / f64::from(order + 2))
}
