use std::f64::consts::PI;
use std::fmt;

use crate::numerics::Differentiable;

/// Named smooth test functions with analytic derivatives of every order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    One,
    Linear,
    Square,
    Sin,
    Exp,
    /// `cos(pi t)`, a member of the periodic mean-zero space on `[0, 2]`.
    CosPi,
}

impl TestFunction {
    pub const ALL: [TestFunction; 6] = [
        TestFunction::One,
        TestFunction::Linear,
        TestFunction::Square,
        TestFunction::Sin,
        TestFunction::Exp,
        TestFunction::CosPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::Linear => "linear",
            TestFunction::Square => "square",
            TestFunction::Sin => "sin",
            TestFunction::Exp => "exp",
            TestFunction::CosPi => "cospi",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn eval(self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Differentiable for TestFunction {
    fn derivative(&self, x: f64, order: u32) -> f64 {
        match (self, order) {
            (TestFunction::One, 0) => 1.0,
            (TestFunction::One, _) => 0.0,
            (TestFunction::Linear, 0) => x,
            (TestFunction::Linear, 1) => 1.0,
            (TestFunction::Linear, _) => 0.0,
            (TestFunction::Square, 0) => x * x,
            (TestFunction::Square, 1) => 2.0 * x,
            (TestFunction::Square, 2) => 2.0,
            (TestFunction::Square, _) => 0.0,
            (TestFunction::Sin, n) => (x + f64::from(n) * PI / 2.0).sin(),
            (TestFunction::Exp, _) => x.exp(),
            (TestFunction::CosPi, n) => PI.powi(n as i32) * (PI * x + f64::from(n) * PI / 2.0).cos(),
        }
    }
}
