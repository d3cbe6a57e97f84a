//! Traveling-wave analysis for three generalized Camassa-Holm equations.
//!
//! The crate covers equilibria and their linearizations, first integrals and
//! flows of the regularized planar systems, peakon/cuspon classification on
//! the singular line, and two-sided exponential-series homoclinic solutions
//! anchored at regular saddles.  The [`oracle`] module re-derives the series
//! recurrences numerically and cross-checks series orbits against direct
//! integration.

pub mod equation;
pub mod error;
pub mod oracle;
pub mod phase;
pub mod poly;
pub mod series;

pub use equation::{
    build_system, equilibria, singular_set, traveling_residual, EquationId, PlanarSystem,
    SingularSet, SystemClass, WaveParams,
};
pub use error::{Error, Result};
pub use phase::{
    classify_equilibrium, classify_singular_wave, first_integral, gstar, integrate_regularized,
    portrait, EquilibriumInfo, EquilibriumKind, FirstIntegral, SingularWaveVerdict, Trajectory,
    WaveLabel,
};
pub use series::{
    assemble, build_branch, convergence_report, evaluate_wave, exact_g0, saddle_eigenvalues,
    solve_continuity, ConvergenceReport, ExactG0Solution, HomoclinicSolution, SeriesBranch, Side,
    Strategy, Verdict,
};
