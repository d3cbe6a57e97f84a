//! The three traveling-wave ODEs, their planar singular systems and the
//! regularized (smooth) systems obtained by rescaling time.

use std::fmt;
use std::str::FromStr;

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cubic_roots, quadratic_roots, Poly2, RealRoot};

/// Which generalized Camassa-Holm equation is in play.
///
/// * `Gch1`: `(1-D^2)u_t = D(4-D^2)u^2`
/// * `Gch2`: `(1-D^2)u_t = D(2+D)[(2-D)u]^2`
/// * `Gch3`: `(1-D^2)u_t = D(u^2 u_xx - u_x^2 u_xx + u u_x^2 - u^3)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationId {
    Gch1,
    Gch2,
    Gch3,
}

impl EquationId {
    pub const ALL: [EquationId; 3] = [EquationId::Gch1, EquationId::Gch2, EquationId::Gch3];

    pub fn tag(self) -> &'static str {
        match self {
            EquationId::Gch1 => "gch1",
            EquationId::Gch2 => "gch2",
            EquationId::Gch3 => "gch3",
        }
    }

    /// Invariance of the traveling ODE under `z -> -z`.
    pub fn is_reversible(self) -> bool {
        !matches!(self, EquationId::Gch2)
    }

    pub fn class(self) -> SystemClass {
        match self {
            EquationId::Gch1 => SystemClass::TypeOne,
            EquationId::Gch2 | EquationId::Gch3 => SystemClass::TypeTwo,
        }
    }

    /// Ascending coefficients of the equilibrium polynomial in `phi`.
    pub fn equilibrium_poly(self, p: WaveParams) -> Vec<f64> {
        let (c, g) = (p.c(), p.g());
        match self {
            EquationId::Gch1 => vec![g, c, 4.0],
            EquationId::Gch2 => vec![g, c, 8.0],
            EquationId::Gch3 => vec![g, -c, 0.0, 1.0],
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for EquationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "gch1" | "gchi" => Ok(EquationId::Gch1),
            "gch2" | "gchii" => Ok(EquationId::Gch2),
            "gch3" | "gchiii" => Ok(EquationId::Gch3),
            _ => Err(Error::InvalidInput(format!("unknown equation tag '{s}'"))),
        }
    }
}

#[derive(Deserialize)]
struct RawParams {
    c: f64,
    g: f64,
}

/// Wave speed `c` and integration constant `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct WaveParams {
    c: f64,
    g: f64,
}

impl TryFrom<RawParams> for WaveParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        WaveParams::new(r.c, r.g)
    }
}

impl WaveParams {
    pub fn new(c: f64, g: f64) -> Result<Self> {
        if !c.is_finite() || c == 0.0 {
            return Err(Error::ZeroSpeed(c));
        }
        if !g.is_finite() {
            return Err(Error::NonFinite("g"));
        }
        Ok(Self { c, g })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// First type: `y' = -(G'(phi) y^2 + F(phi)) / G(phi)`; second type:
/// `y' = Q(phi, y) / f(phi, y)` with `y f_phi + Q_y == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemClass {
    TypeOne,
    TypeTwo,
}

/// `phi' = y`, `y' = numerator / denominator`.  The regularized system is
/// `phi' = y * denominator`, `y' = numerator` in the rescaled time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarSystem {
    pub equation: EquationId,
    pub params: WaveParams,
    pub numerator: Poly2,
    pub denominator: Poly2,
    pub class: SystemClass,
}

pub fn build_system(eq: EquationId, p: WaveParams) -> PlanarSystem {
    let (c, g) = (p.c(), p.g());
    let (numerator, denominator) = match eq {
        EquationId::Gch1 => (
            Poly2::from_terms(&[(2, 0, 4.0), (0, 2, -2.0), (1, 0, c), (0, 0, g)]),
            Poly2::from_terms(&[(0, 0, c), (1, 0, 2.0)]),
        ),
        EquationId::Gch2 => (
            Poly2::from_terms(&[(2, 0, 8.0), (0, 2, -2.0), (1, 0, c), (0, 0, g)]),
            Poly2::from_terms(&[(0, 0, c), (1, 0, 4.0), (0, 1, -2.0)]),
        ),
        EquationId::Gch3 => (
            Poly2::from_terms(&[(1, 2, 1.0), (1, 0, c), (0, 0, -g), (3, 0, -1.0)]),
            Poly2::from_terms(&[(0, 0, c), (2, 0, -1.0), (0, 2, 1.0)]),
        ),
    };
    PlanarSystem { equation: eq, params: p, numerator, denominator, class: eq.class() }
}

impl PlanarSystem {
    /// Right-hand side of the regularized system.
    pub fn regularized_rhs(&self, phi: f64, y: f64) -> [f64; 2] {
        [y * self.denominator.eval(phi, y), self.numerator.eval(phi, y)]
    }

    /// Jacobian `[[d phi'/d phi, d phi'/d y], [d y'/d phi, d y'/d y]]` of the
    /// regularized system.
    pub fn regularized_jacobian(&self, phi: f64, y: f64) -> [[f64; 2]; 2] {
        let d = &self.denominator;
        let n = &self.numerator;
        [
            [y * d.d_phi().eval(phi, y), d.eval(phi, y) + y * d.d_y().eval(phi, y)],
            [n.d_phi().eval(phi, y), n.d_y().eval(phi, y)],
        ]
    }

    /// Right-hand side of the singular system, `None` on the singular set.
    pub fn singular_rhs(&self, phi: f64, y: f64) -> Option<[f64; 2]> {
        let den = self.denominator.eval(phi, y);
        (den != 0.0).then(|| [y, self.numerator.eval(phi, y) / den])
    }

    /// `y * df/dphi + dQ/dy` as a polynomial; identically zero for type-two
    /// systems.
    pub fn integrability_defect(&self) -> Poly2 {
        let y = Poly2::from_terms(&[(0, 1, 1.0)]);
        &(&y * &self.denominator.d_phi()) + &self.numerator.d_y()
    }
}

/// Curve on which the singular system's right-hand side blows up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SingularSet {
    /// `phi = phi_s`, with `Y = -F(phi_s)/G'(phi_s)` and the points
    /// `S_{+-} = (phi_s, +-sqrt(Y))`, present iff `Y > 0`.
    VerticalLine { phi_s: f64, y_sq: f64, points: Vec<(f64, f64)> },
    /// `a phi + b y + d = 0`.
    StraightLine { a: f64, b: f64, d: f64 },
    /// `phi^2 - y^2 = c`.
    Hyperbola { c: f64 },
}

impl SingularSet {
    /// Value of the defining function at `(phi, y)`; zero on the set.
    pub fn defect(&self, phi: f64, y: f64) -> f64 {
        match *self {
            SingularSet::VerticalLine { phi_s, .. } => phi - phi_s,
            SingularSet::StraightLine { a, b, d } => a * phi + b * y + d,
            SingularSet::Hyperbola { c } => phi * phi - y * y - c,
        }
    }

    pub fn singular_points(&self) -> &[(f64, f64)] {
        match self {
            SingularSet::VerticalLine { points, .. } => points,
            _ => &[],
        }
    }
}

pub fn singular_set(eq: EquationId, p: WaveParams) -> SingularSet {
    let c = p.c();
    match eq {
        EquationId::Gch1 => {
            // G = c + 2 phi, F = -(4 phi^2 + c phi + g).
            let phi_s = -c / 2.0;
            let f_s = -(4.0 * phi_s * phi_s + c * phi_s + p.g());
            let y_sq = -f_s / 2.0;
            let points = if y_sq > 0.0 {
                let r = y_sq.sqrt();
                vec![(phi_s, r), (phi_s, -r)]
            } else {
                Vec::new()
            };
            SingularSet::VerticalLine { phi_s, y_sq, points }
        }
        EquationId::Gch2 => SingularSet::StraightLine { a: 4.0, b: -2.0, d: c },
        EquationId::Gch3 => SingularSet::Hyperbola { c },
    }
}

/// `LHS - RHS` of the traveling-wave ODE at one point.
///
/// Generic so the same expression serves real evaluation and complex
/// sampling in the verification layer.
pub fn residual_generic<T>(eq: EquationId, c: f64, g: f64, phi: T, d1: T, d2: T) -> T
where
    T: Num + Copy + From<f64>,
{
    let k = |v: f64| T::from(v);
    let lhs = k(-c) * phi + k(c) * d2;
    let rhs = match eq {
        EquationId::Gch1 => k(4.0) * phi * phi - k(2.0) * phi * d2 - k(2.0) * d1 * d1 + k(g),
        EquationId::Gch2 => {
            k(8.0) * phi * phi - k(4.0) * phi * d2 - k(2.0) * d1 * d1 + k(2.0) * d1 * d2 + k(g)
        }
        // LHS - RHS = (phi'' - phi)(c - phi^2 + phi'^2) + g; the factored form
        // avoids cancelling cubic terms of large solutions.
        EquationId::Gch3 => return (d2 - phi) * (k(c) - phi * phi + d1 * d1) + k(g),
    };
    lhs - rhs
}

/// `LHS - RHS` of the traveling-wave ODE given `phi`, `phi'`, `phi''`.
pub fn traveling_residual(eq: EquationId, p: WaveParams, phi: f64, d1: f64, d2: f64) -> f64 {
    residual_generic(eq, p.c(), p.g(), phi, d1, d2)
}

/// Real equilibria `phi` (roots of the equilibrium polynomial), ascending,
/// with multiplicity.
pub fn equilibria(eq: EquationId, p: WaveParams) -> Vec<RealRoot> {
    let (c, g) = (p.c(), p.g());
    match eq {
        EquationId::Gch1 => quadratic_roots(4.0, c, g),
        EquationId::Gch2 => quadratic_roots(8.0, c, g),
        EquationId::Gch3 => cubic_roots(1.0, 0.0, -c, g),
    }
}

/// The equilibrium closest to `guess`, if one lies within `tol`.
pub fn snap_equilibrium(eq: EquationId, p: WaveParams, guess: f64, tol: f64) -> Option<f64> {
    equilibria(eq, p)
        .into_iter()
        .map(|r| r.value)
        .min_by(|a, b| (a - guess).abs().total_cmp(&(b - guess).abs()))
        .filter(|r| (r - guess).abs() <= tol)
}
