use thiserror::Error;

use crate::phase::Trajectory;

/// Errors produced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wave speed c must be nonzero and finite (got {0})")]
    ZeroSpeed(f64),

    #[error("parameter is not finite: {0}")]
    NonFinite(&'static str),

    #[error("({phi}, {y}) is not an equilibrium of the regularized system (residual {residual:e})")]
    NotAnEquilibrium { phi: f64, y: f64, residual: f64 },

    #[error("x0 = {x0} is not a saddle: eigenvalue radicand {radicand} is not positive")]
    NotASaddle { x0: f64, radicand: f64 },

    #[error("x0 = {x0} lies on the singular set; the linearization degenerates")]
    SingularDegeneracy { x0: f64 },

    #[error("resonance at order k = {k}: F(k*exponent) = {value:e}")]
    Resonance { k: usize, value: f64 },

    #[error("truncation order M = {0} outside supported range [2, {max}]", max = crate::series::MAX_ORDER)]
    InvalidOrder(usize),

    #[error("no real continuity root for the {side} branch (target {target}); try a matched or explicit-target construction")]
    NoContinuousAssembly { side: &'static str, target: f64 },

    #[error("{0} is not supported for this equation")]
    UnsupportedEquation(&'static str),

    #[error("exact g = 0 solutions exist only for GCH-III with g = 0")]
    ExactRequiresG0,

    #[error("invalid exact-solution family {0}; expected 1, 2 or 3")]
    InvalidFamily(u8),

    #[error("no sign change of the bracketing function on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("integration diverged (state norm exceeded {limit:e})")]
    Divergence { limit: f64, trajectory: Box<Trajectory> },

    #[error("sampling matrix is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
