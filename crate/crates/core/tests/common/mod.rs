#![allow(dead_code)]

use gchtw_core::phase::regular_equilibria;
use gchtw_core::{saddle_eigenvalues, EquationId, EquilibriumKind, WaveParams};

pub fn params(c: f64, g: f64) -> WaveParams {
    WaveParams::new(c, g).unwrap()
}

/// Exact equilibrium nearest to a rounded value.
pub fn root_near(eq: EquationId, p: WaveParams, guess: f64) -> f64 {
    gchtw_core::equilibria(eq, p)
        .iter()
        .map(|r| r.value)
        .min_by(|a, b| (a - guess).abs().total_cmp(&(b - guess).abs()))
        .expect("no equilibria")
}

/// Maps a unit-interval draw onto a `g` for which the equation has two or
/// three equilibria, so at least one regular saddle exists.
pub fn g_in_saddle_range(eq: EquationId, c: f64, s: f64) -> f64 {
    match eq {
        EquationId::Gch1 => c * c * (-0.5 + 0.56 * s),
        EquationId::Gch2 => c * c * (-0.5 + 0.53 * s),
        EquationId::Gch3 => {
            let bound = 2.0 * c / 3.0 * (c / 3.0).sqrt();
            bound * (-0.95 + 1.9 * s)
        }
    }
}

/// Speed draw in `[lo, hi]` with random sign; GCH-III needs `c > 0` for
/// three equilibria, so its sign is kept positive.
pub fn speed(eq: EquationId, magnitude: f64, negative: bool) -> f64 {
    if negative && eq != EquationId::Gch3 { -magnitude } else { magnitude }
}

/// A regular saddle with a usable linearization, if the configuration has one.
pub fn saddle_config(eq: EquationId, c: f64, g: f64) -> Option<(WaveParams, f64, f64)> {
    let p = WaveParams::new(c, g).ok()?;
    regular_equilibria(eq, p)
        .into_iter()
        .filter(|e| e.kind == EquilibriumKind::Saddle)
        .find_map(|e| {
            let x0 = e.location.0;
            let (a, _) = saddle_eigenvalues(eq, p, x0).ok()?;
            (a > 0.05).then_some((p, x0, a))
        })
}
