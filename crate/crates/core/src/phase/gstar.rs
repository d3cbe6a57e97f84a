//! The GCH-III level `g*` at which the homoclinic level of the middle saddle
//! passes through `(sqrt(c), 0)`, and the intersections of that level with
//! the singular hyperbola.

use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};
use crate::error::{Error, Result};
use crate::phase::integral::first_integral;
use crate::poly::cubic_roots;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GStar {
    pub c: f64,
    pub g_star: f64,
    /// The middle equilibrium `z2(g*)`.
    pub saddle: f64,
    /// `H(z2, 0)` for the first integral as implemented (`H(0, 0) = 0`).
    pub h2: f64,
    /// The same level shifted by `c^2/4`, so that on the hyperbola the level
    /// reads `g phi`.
    pub h2_shifted: f64,
    /// `g* sqrt(c) / 4`, a constant sometimes quoted for this level.
    pub h2_quarter: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaIntersection {
    pub c: f64,
    pub g: f64,
    pub h2: f64,
    pub h2_shifted: f64,
    pub phi_s: f64,
    pub y_s: f64,
    pub points: [(f64, f64); 2],
}

const TANGENT_SLACK: f64 = 1e-8;

/// Upper end `(2c/3) sqrt(c/3)` of the three-equilibrium regime.
pub fn three_root_bound(c: f64) -> f64 {
    2.0 * c / 3.0 * (c / 3.0).sqrt()
}

fn middle_root(c: f64, g: f64) -> Option<f64> {
    let r = cubic_roots(1.0, 0.0, -c, g);
    match r.len() {
        3 => Some(r[1].value),
        // Merged pair at the regime boundary.
        2 => r.iter().find(|x| x.multiplicity == 2).map(|x| x.value),
        _ => None,
    }
}

fn level_gap(c: f64, g: f64) -> Option<f64> {
    let z2 = middle_root(c, g)?;
    let h = first_integral(EquationId::Gch3, WaveParams::new(c, g).ok()?);
    Some(h.value_at(z2, 0.0) - h.value_at(c.sqrt(), 0.0))
}

/// Bisection for `g*` on `(0, (2c/3) sqrt(c/3))`.
pub fn gstar(c: f64, tol: f64) -> Result<GStar> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("gstar needs c > 0 (got {c})")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive (got {tol})")));
    }
    let hi0 = three_root_bound(c);
    let (mut lo, mut hi) = (hi0 * 1e-12, hi0 * (1.0 - 1e-12));
    let s_lo = level_gap(c, lo).ok_or(Error::NoRoot { lo, hi })?;
    let s_hi = level_gap(c, hi).ok_or(Error::NoRoot { lo, hi })?;
    if s_lo.signum() == s_hi.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let s = level_gap(c, mid).ok_or(Error::NoRoot { lo, hi })?;
        if s.signum() == s_lo.signum() { lo = mid } else { hi = mid }
        iterations += 1;
    }
    let g = 0.5 * (lo + hi);
    let saddle = middle_root(c, g).ok_or(Error::NoRoot { lo, hi })?;
    let h = first_integral(EquationId::Gch3, WaveParams::new(c, g)?);
    let h2 = h.value_at(saddle, 0.0);
    Ok(GStar {
        c,
        g_star: g,
        saddle,
        h2,
        h2_shifted: h2 + c * c / 4.0,
        h2_quarter: 0.25 * g * c.sqrt(),
        bracket: (0.0, hi0),
        iterations,
    })
}

/// Points `P+-(phi_s, +-y_s)` where the level through the middle saddle meets
/// the hyperbola `phi^2 - y^2 = c`.  On the hyperbola `H = g phi - c^2/4`, so
/// `phi_s = (h2 + c^2/4)/g` and `y_s = sqrt(phi_s^2 - c)`.
pub fn hyperbola_intersections(c: f64, g: f64) -> Result<HyperbolaIntersection> {
    let p = WaveParams::new(c, g)?;
    if c <= 0.0 || g == 0.0 {
        return Err(Error::InvalidInput("intersections need c > 0 and g != 0".into()));
    }
    let z2 = middle_root(c, g)
        .ok_or_else(|| Error::InvalidInput(format!("g = {g} is outside the three-equilibrium regime")))?;
    let h2 = first_integral(EquationId::Gch3, p).value_at(z2, 0.0);
    let shifted = h2 + c * c / 4.0;
    let phi_s = shifted / g;
    let rad = phi_s * phi_s - c;
    // At g* itself the level is tangent at (sqrt(c), 0) and rounding can push
    // the radicand just below zero.
    if rad < -TANGENT_SLACK * c {
        return Err(Error::InvalidInput(format!("level misses the hyperbola (phi_s = {phi_s})")));
    }
    let y_s = rad.max(0.0).sqrt();
    Ok(HyperbolaIntersection { c, g, h2, h2_shifted: shifted, phi_s, y_s, points: [(phi_s, y_s), (phi_s, -y_s)] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gstar_inside_regime() {
        for c in [0.5, 1.0, 2.0] {
            let gs = gstar(c, 1e-12).unwrap();
            assert!(gs.g_star > 0.0 && gs.g_star < three_root_bound(c));
            assert_eq!(cubic_roots(1.0, 0.0, -c, gs.g_star).len(), 3);
            let h = first_integral(EquationId::Gch3, WaveParams::new(c, gs.g_star).unwrap());
            assert!((gs.h2 - h.value_at(c.sqrt(), 0.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn bracket_signs() {
        let c = 2.0;
        let hi = three_root_bound(c);
        assert!(level_gap(c, 1e-9).unwrap() > 0.0);
        assert!(level_gap(c, hi * (1.0 - 1e-9)).unwrap() < 0.0);
    }

    #[test]
    fn intersections_on_hyperbola() {
        let gs = gstar(1.0, 1e-12).unwrap();
        let it = hyperbola_intersections(1.0, gs.g_star * 0.99).unwrap();
        for (x, y) in it.points {
            assert!((x * x - y * y - 1.0).abs() <= 1e-10);
        }
        let h = first_integral(EquationId::Gch3, WaveParams::new(1.0, it.g).unwrap());
        assert!((h.value_at(it.phi_s, it.y_s) - it.h2).abs() < 1e-12);
    }
}
