//! Restarted inertial dynamics with Hessian-driven damping.
//!
//! This crate bundles four things that belong together:
//!
//! * a simulator for the damped inertial ODE
//!   `x'' + (a/t) x' + b H(x) x' + grad f(x) = 0` with restart-event
//!   detection (speed, extended-speed and function-value criteria),
//! * the discrete counterpart: an inertial gradient algorithm with a
//!   gradient-correction term and an extended speed restart rule,
//! * closed-form evaluation of every rate constant attached to the
//!   restart scheme (`tau1`, `tau2`, `tau3`, the contraction factor `Q`,
//!   `M(tau)` and the restart-time upper bounds),
//! * a small benchmark pipeline: test problems (quadratics, log-sum-exp,
//!   sketched kernel logistic/multinomial regression), log-linear rate
//!   fitting and CSV reporting.
//!
//! Everything is deterministic under a seed; see [`rng::Rng`] for the
//! generator contract.

pub mod analysis;
pub mod discrete;
pub mod dynamics;
pub mod objective;
pub mod problems;
pub mod report;
pub mod rng;
pub mod theory;

pub use nalgebra::{DMatrix, DVector};

pub use objective::Objective;
pub use rng::Rng;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value at coordinate {index} in {context}")]
    NonFinite { context: &'static str, index: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{quantity} evaluated outside its domain: {detail}")]
    Domain {
        quantity: &'static str,
        detail: String,
    },

    #[error("operation requires the strong convexity parameter mu, which is not set")]
    MissingMu,

    #[error("no guaranteed lower bound: the criterion polynomial shows no sign change on (0, tau2)")]
    NoGuaranteedLowerBound,

    #[error("operation requires a Hessian-vector product and the finite-difference fallback is disabled")]
    MissingHvp,

    #[error("integrator failure at t = {t}: {detail}")]
    IntegratorFailure { t: f64, detail: String },

    #[error("divergence detected at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns an error naming the first non-finite coordinate, if any.
pub fn ensure_finite(context: &'static str, v: &DVector<f64>) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        None => Ok(()),
        Some(index) => Err(Error::NonFinite { context, index }),
    }
}
