use thiserror::Error;

/// Errors raised while building kernels, assembling problems and solving them.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates one of its invariants.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A point lies outside the domain of the kernel (or of a shifted evaluation).
    #[error("point {point} outside domain [{lo}, {hi}]")]
    Domain { point: f64, lo: f64, hi: f64 },

    /// Two operands, or an operand and a point, disagree on dimension or domain.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// The kernel cannot evaluate the requested derivative orders.
    #[error("{kernel} does not support partial derivative of order ({order_s}, {order_t})")]
    Capability {
        kernel: String,
        order_s: u32,
        order_t: u32,
    },

    /// The Gram system is singular beyond the jitter cap, i.e. the functionals are not free.
    #[error("rank-deficient Gram matrix at pivot {pivot} (jitter cap {jitter_cap:e})")]
    RankDeficient { pivot: usize, jitter_cap: f64 },

    /// A constraint contradicts a condition built into the space.
    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    /// A function handed to an inner product is not a member of the space.
    #[error("function is not in the space: {0}")]
    Membership(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
