//! Two-sided exponential-series homoclinic solutions anchored at regular
//! saddles: `phi(z) = x0 + sum_k a_k e^{k alpha z}` for `z > 0` and a second
//! series in `e^{k beta z}` for `z < 0`.

mod assemble;
mod branch;
mod continuity;
mod convergence;
mod eigen;
mod exact;
mod recurrence;

pub use assemble::{assemble, assemble_with, evaluate_wave, Construction, HomoclinicSolution, Profile, Strategy};
pub use branch::{build_branch, build_branch_with, normalized_coefficients, SeriesBranch, Side};
pub use continuity::{continuity_polynomial, solve_continuity, solve_continuity_with};
pub use convergence::{convergence_report, ConvergenceReport, Verdict};
pub use eigen::{eigen_radicand, saddle_eigenvalues};
pub use exact::{exact_g0, ExactG0Solution};
pub use recurrence::{
    forcing, linear_factor, pair_bracket, residual_pair_coefficient, residual_triple_coefficient,
    triple_bracket, ForcingSign,
};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 200;
pub const DEFAULT_ORDER: usize = 25;
/// Coefficient magnitude beyond which a branch is flagged as overflowed.
pub const OVERFLOW_GUARD: f64 = 1e12;
