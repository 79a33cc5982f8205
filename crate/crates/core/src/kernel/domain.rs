use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    // Relative slack so that grid endpoints and shifted points such as
    // `s + 2h` are not rejected over a rounding error.
    fn slack(&self) -> f64 {
        let mut scale: f64 = 1.0;
        if self.lo.is_finite() {
            scale = scale.max(self.lo.abs());
        }
        if self.hi.is_finite() {
            scale = scale.max(self.hi.abs());
        }
        1e-12 * scale
    }

    pub fn contains(&self, x: f64) -> bool {
        let eps = self.slack();
        x.is_finite() && x >= self.lo - eps && x <= self.hi + eps
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                point: x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Product of intervals, one per coordinate of a kernel argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain(pub Vec<Interval>);

impl Domain {
    pub fn interval(iv: Interval) -> Self {
        Domain(vec![iv])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn check(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DomainMismatch(format!(
                "point has {} coordinates, kernel expects {}",
                point.len(),
                self.dim()
            )));
        }
        self.0.iter().zip(point).try_for_each(|(iv, &x)| iv.check(x))
    }

    /// Coordinatewise intersection; `None` when dimensions differ or a factor is empty.
    pub fn intersect(&self, other: &Domain) -> Option<Domain> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(Domain)
    }

    pub fn product(&self, other: &Domain) -> Domain {
        Domain(self.0.iter().chain(&other.0).copied().collect())
    }
}
