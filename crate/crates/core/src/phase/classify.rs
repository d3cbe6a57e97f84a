use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equation::{build_system, equilibria, EquationId, PlanarSystem, WaveParams};
use crate::error::{Error, Result};

/// Residual bound on the regularized field for a point to count as an
/// equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;
/// The largest Newton move accepted when snapping a rounded location onto the
/// equilibrium it approximates.
pub const SNAP_RADIUS: f64 = 1e-3;
const DEGENERATE_REL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumKind {
    Saddle,
    Center,
    Degenerate,
    /// Positive determinant with nonzero trace.  The three systems here have
    /// zero trace at every equilibrium off the singular set, so this only shows
    /// up for exotic inputs.
    Node,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Regular,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumInfo {
    pub location: (f64, f64),
    pub kind: EquilibriumKind,
    pub eigenvalues: [Complex64; 2],
    pub jacobian_determinant: f64,
    pub trace: f64,
    pub origin: Origin,
}

fn field_norm(sys: &PlanarSystem, phi: f64, y: f64) -> f64 {
    let [a, b] = sys.regularized_rhs(phi, y);
    a.hypot(b)
}

fn newton_snap(sys: &PlanarSystem, phi: f64, y: f64) -> Option<(f64, f64)> {
    let (mut u, mut v) = (phi, y);
    for _ in 0..50 {
        let [f0, f1] = sys.regularized_rhs(u, v);
        let j = sys.regularized_jacobian(u, v);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let du = (f0 * j[1][1] - f1 * j[0][1]) / det;
        let dv = (j[0][0] * f1 - j[1][0] * f0) / det;
        u -= du;
        v -= dv;
        if du.hypot(dv) <= 1e-15 * (1.0 + u.hypot(v)) {
            break;
        }
    }
    Some((u, v))
}

fn eig2(tr: f64, det: f64) -> [Complex64; 2] {
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    let half = Complex64::new(tr / 2.0, 0.0);
    [half + disc / 2.0, half - disc / 2.0]
}

/// Classifies an equilibrium of the regularized system by its linearization.
///
/// Locations given to a few decimals are moved onto the nearby exact
/// equilibrium by Newton's method when the move is at most [`SNAP_RADIUS`].
pub fn classify_equilibrium(eq: EquationId, p: WaveParams, location: (f64, f64)) -> Result<EquilibriumInfo> {
    let sys = build_system(eq, p);
    classify_in(&sys, location)
}

pub(crate) fn classify_in(sys: &PlanarSystem, location: (f64, f64)) -> Result<EquilibriumInfo> {
    let (phi, y) = location;
    if !phi.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite("location"));
    }
    let scale = 1.0 + sys.params.c().abs() + phi.abs() + y.abs();
    let residual = field_norm(sys, phi, y);
    let (phi, y) = if residual <= EQUILIBRIUM_TOL * scale {
        (phi, y)
    } else {
        match newton_snap(sys, phi, y) {
            Some((u, v))
                if (u - phi).hypot(v - y) <= SNAP_RADIUS
                    && field_norm(sys, u, v) <= EQUILIBRIUM_TOL * scale =>
            {
                (u, v)
            }
            _ => return Err(Error::NotAnEquilibrium { phi, y, residual }),
        }
    };

    let j = sys.regularized_jacobian(phi, y);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let tr = j[0][0] + j[1][1];
    let mag = j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let kind = if det.abs() <= DEGENERATE_REL * mag * mag || mag == 0.0 {
        EquilibriumKind::Degenerate
    } else if det < 0.0 {
        EquilibriumKind::Saddle
    } else if tr.abs() <= DEGENERATE_REL * mag {
        EquilibriumKind::Center
    } else {
        EquilibriumKind::Node
    };
    let den = sys.denominator.eval(phi, y);
    let den_scale = sys.denominator.max_abs_coeff() * (1.0 + phi.abs() + y.abs()).powi(2);
    let origin = if den.abs() <= 1e-9 * den_scale { Origin::Singular } else { Origin::Regular };
    Ok(EquilibriumInfo {
        location: (phi, y),
        kind,
        eigenvalues: eig2(tr, det),
        jacobian_determinant: det,
        trace: tr,
        origin,
    })
}

/// Equilibria on the `phi` axis, i.e. roots of the equilibrium polynomial.
pub fn regular_equilibria(eq: EquationId, p: WaveParams) -> Vec<EquilibriumInfo> {
    let sys = build_system(eq, p);
    equilibria(eq, p)
        .iter()
        .filter_map(|r| classify_in(&sys, (r.value, 0.0)).ok())
        .collect()
}

/// Isolated equilibria of the regularized system lying on the singular set.
///
/// For GCH-III with `g = 0` the whole hyperbola consists of equilibria; no
/// isolated points are returned in that case.
pub fn singular_equilibria(eq: EquationId, p: WaveParams) -> Vec<EquilibriumInfo> {
    let (c, g) = (p.c(), p.g());
    let points: Vec<(f64, f64)> = match eq {
        EquationId::Gch1 => crate::equation::singular_set(eq, p).singular_points().to_vec(),
        EquationId::Gch2 => {
            let phi = (2.0 * g - c * c) / (6.0 * c);
            vec![(phi, (c + 4.0 * phi) / 2.0)]
        }
        EquationId::Gch3 => Vec::new(),
    };
    let sys = build_system(eq, p);
    points.into_iter().filter_map(|pt| classify_in(&sys, pt).ok()).collect()
}
