use serde::{Deserialize, Serialize};

use crate::equation::traveling_residual;
use crate::series::{HomoclinicSolution, Profile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualScan {
    /// Maximum `|residual|` over grid points beyond the per-side thresholds.
    pub max_residual: f64,
    /// `2/|exponent|` for the right and left branch (0 for exact solutions).
    pub thresholds: (f64, f64),
    /// `(z, residual)` for every grid point, including those near `z = 0`.
    pub profile: Vec<(f64, f64)>,
}

/// Evaluates the traveling residual of `sol` along `z_grid` using exact
/// term-by-term derivatives.  The junction point `z = 0` is skipped.
pub fn residual_scan(sol: &HomoclinicSolution, z_grid: &[f64]) -> ResidualScan {
    let thresholds = match &sol.profile {
        Profile::Series { right, left, .. } => (2.0 / right.exponent.abs(), 2.0 / left.exponent.abs()),
        Profile::Exact { .. } => (0.0, 0.0),
    };
    let mut max_residual = 0.0f64;
    let mut profile = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        if z == 0.0 {
            continue;
        }
        let (f, d1, d2) = sol.derivatives(z);
        let r = traveling_residual(sol.equation, sol.params, f, d1, d2);
        profile.push((z, r));
        let limit = if z > 0.0 { thresholds.0 } else { thresholds.1 };
        if z.abs() >= limit {
            max_residual = max_residual.max(r.abs());
        }
    }
    ResidualScan { max_residual, thresholds, profile }
}
