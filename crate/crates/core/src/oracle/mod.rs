//! Independent checks: recurrence brackets recovered numerically from the
//! traveling residual, residual scans of assembled solutions, and direct
//! shooting along the saddle manifolds.

mod extract;
mod scan;
mod shoot;

pub use extract::{
    extract_recurrence, extract_recurrence_with, recurrence_mismatch, ExtractedRecurrence, PairTerm, Sampling,
    TripleTerm,
};
pub use scan::{residual_scan, ResidualScan};
pub use shoot::{auto_saddle, manifold_shoot, shoot_for_branch, Manifold, ShootReport, RETURN_TOL};
