use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};
use crate::error::{Error, Result};
use crate::series::eigen::saddle_eigenvalues;
use crate::series::recurrence::{forcing, linear_factor, ForcingSign};
use crate::series::{MAX_ORDER, OVERFLOW_GUARD};

const RESONANCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `z > 0`, negative exponent.
    Right,
    /// `z < 0`, positive exponent.
    Left,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

/// One-sided truncated series `x0 + sum_{k=1}^{M} a_k e^{k exponent z}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesBranch {
    pub x0: f64,
    pub exponent: f64,
    pub order: usize,
    /// `a_1..a_M`; shorter than `order` when the overflow guard tripped.
    pub coefficients: Vec<f64>,
    pub side: Side,
    #[serde(default)]
    pub sign: ForcingSign,
    #[serde(default)]
    pub overflowed: bool,
}

impl SeriesBranch {
    pub fn leading(&self) -> f64 {
        self.coefficients[0]
    }

    /// `(phi, phi', phi'')` at `z`, differentiating the truncated series term
    /// by term.
    pub fn derivatives(&self, z: f64) -> (f64, f64, f64) {
        let e = (self.exponent * z).exp();
        let (mut p, mut d1, mut d2) = (self.x0, 0.0, 0.0);
        let mut ek = 1.0;
        for (idx, a) in self.coefficients.iter().enumerate() {
            ek *= e;
            let kb = (idx + 1) as f64 * self.exponent;
            let t = a * ek;
            p += t;
            d1 += kb * t;
            d2 += kb * kb * t;
        }
        (p, d1, d2)
    }

    pub fn value(&self, z: f64) -> f64 {
        self.derivatives(z).0
    }

    /// `phi(0) = x0 + sum a_k`.
    pub fn junction_value(&self) -> f64 {
        self.x0 + self.coefficients.iter().sum::<f64>()
    }

    /// `sum |a_k| e^{-|exponent| |z|}`, a bound on `|phi(z) - x0|` on this side.
    pub fn tail_bound(&self, z: f64) -> f64 {
        let e = (-(self.exponent.abs()) * z.abs()).exp();
        self.coefficients.iter().map(|a| a.abs()).sum::<f64>() * e
    }

    /// The same coefficients with the exponent negated: `z -> -z`.
    pub fn mirrored(&self) -> SeriesBranch {
        SeriesBranch {
            exponent: -self.exponent,
            side: match self.side {
                Side::Right => Side::Left,
                Side::Left => Side::Right,
            },
            ..self.clone()
        }
    }
}

fn side_exponent(eq: EquationId, p: WaveParams, x0: f64, side: Side) -> Result<f64> {
    let (plus, minus) = saddle_eigenvalues(eq, p, x0)?;
    Ok(match side {
        Side::Right => minus,
        Side::Left => plus,
    })
}

fn check_order(m: usize) -> Result<()> {
    if (2..=MAX_ORDER).contains(&m) { Ok(()) } else { Err(Error::InvalidOrder(m)) }
}

/// Runs the recurrence from `a_1 = leading`; returns the coefficients and
/// whether the overflow guard tripped (`guard = None` disables it).
fn run_recurrence(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    exponent: f64,
    leading: f64,
    m: usize,
    sign: ForcingSign,
    guard: Option<f64>,
) -> Result<(Vec<f64>, bool)> {
    let mut a = Vec::with_capacity(m);
    a.push(leading);
    for k in 2..=m {
        let f = linear_factor(eq, p, x0, k as f64 * exponent);
        let ref_scale = linear_factor(eq, p, x0, 0.0).abs().max((k as f64 * exponent).powi(2));
        if f.abs() <= RESONANCE_TOL * ref_scale.max(1.0) {
            return Err(Error::Resonance { k, value: f });
        }
        let ak = forcing(eq, x0, exponent, k, &a, sign) / f;
        if let Some(limit) = guard {
            if !ak.is_finite() || ak.abs() > limit {
                return Ok((a, true));
            }
        }
        a.push(ak);
    }
    Ok((a, false))
}

/// Builds the branch on `side` with leading coefficient `leading` under the
/// standard sign convention.
pub fn build_branch(eq: EquationId, p: WaveParams, x0: f64, leading: f64, m: usize, side: Side) -> Result<SeriesBranch> {
    build_branch_with(eq, p, x0, leading, m, side, ForcingSign::Standard)
}

pub fn build_branch_with(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    leading: f64,
    m: usize,
    side: Side,
    sign: ForcingSign,
) -> Result<SeriesBranch> {
    check_order(m)?;
    if !leading.is_finite() {
        return Err(Error::NonFinite("leading coefficient"));
    }
    let exponent = side_exponent(eq, p, x0, side)?;
    // a_k = phi_k a_1^k with phi_k from a_1 = 1, so a branch is exactly the
    // series the continuity polynomial describes.  Normalized coefficients
    // can overflow when a_1 is small and M large; then run directly.
    let (phi, _) = run_recurrence(eq, p, x0, exponent, 1.0, m, sign, None)?;
    let (coefficients, overflowed) = if phi.iter().all(|v| v.is_finite()) {
        scale_coefficients(&phi, leading)
    } else {
        run_recurrence(eq, p, x0, exponent, leading, m, sign, Some(OVERFLOW_GUARD))?
    };
    Ok(SeriesBranch { x0, exponent, order: m, coefficients, side, sign, overflowed })
}

fn scale_coefficients(phi: &[f64], leading: f64) -> (Vec<f64>, bool) {
    let mut out = Vec::with_capacity(phi.len());
    let mut pow = 1.0;
    for v in phi {
        pow *= leading;
        let ak = v * pow;
        if !ak.is_finite() || ak.abs() > OVERFLOW_GUARD {
            return (out, true);
        }
        out.push(ak);
    }
    (out, false)
}

/// `phi_1..phi_M` with `a_k = phi_k a_1^k`, i.e. the recurrence run from
/// `a_1 = 1` without the overflow guard.
pub fn normalized_coefficients(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    m: usize,
    side: Side,
    sign: ForcingSign,
) -> Result<(f64, Vec<f64>)> {
    check_order(m)?;
    let exponent = side_exponent(eq, p, x0, side)?;
    let (phi, _) = run_recurrence(eq, p, x0, exponent, 1.0, m, sign, None)?;
    Ok((exponent, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::traveling_residual;

    fn p(c: f64, g: f64) -> WaveParams {
        WaveParams::new(c, g).unwrap()
    }

    #[test]
    fn gch2_zero_g_right_branch_vanishes() {
        for c in [0.5, 1.0, -2.0] {
            let b = build_branch(EquationId::Gch2, p(c, 0.0), 0.0, 0.37, 50, Side::Right).unwrap();
            assert_eq!(b.exponent, -1.0);
            assert!(b.coefficients[1..].iter().all(|a| *a == 0.0));
        }
    }

    #[test]
    fn gch2_zero_g_left_branch_two_terms() {
        let c = 0.5;
        let b1 = 0.0821;
        let b = build_branch(EquationId::Gch2, p(c, 0.0), 0.0, b1, 50, Side::Left).unwrap();
        let b2 = 4.0 * b1 * b1 / (3.0 * c);
        assert!((b.coefficients[1] - b2).abs() <= 1e-15);
        assert!(b.coefficients[2..].iter().all(|a| *a == 0.0));
    }

    #[test]
    fn anchor_branch_residual() {
        let params = p(0.5, 0.014);
        let x0 = crate::equation::equilibria(EquationId::Gch1, params)[1].value;
        let b = build_branch(EquationId::Gch1, params, x0, 0.0357, 10, Side::Right).unwrap();
        for i in 0..=98 {
            let z = 0.2 + 0.1 * i as f64;
            let (f, d1, d2) = b.derivatives(z);
            assert!(traveling_residual(EquationId::Gch1, params, f, d1, d2).abs() <= 1e-8, "z = {z}");
        }
    }

    #[test]
    fn order_range() {
        let params = p(0.5, 0.014);
        assert!(matches!(
            build_branch(EquationId::Gch1, params, -0.0423, 0.1, 1, Side::Right),
            Err(Error::InvalidOrder(1))
        ));
        assert!(build_branch(EquationId::Gch1, params, -0.0423, 0.1, MAX_ORDER + 1, Side::Right).is_err());
    }

    #[test]
    fn overflow_guard_truncates() {
        let params = p(-1.0, 0.06);
        let b = build_branch(EquationId::Gch1, params, 0.1, 50.0, 200, Side::Right).unwrap();
        assert!(b.overflowed);
        assert!(b.coefficients.len() < 200);
        assert!(b.coefficients.iter().all(|a| a.abs() <= OVERFLOW_GUARD));
    }

    #[test]
    fn resonance_is_an_error() {
        // F(k alpha) = (k^2 - 1)(8 x0 + c) for GCH-I, so resonance needs the
        // saddle to be nearly degenerate.
        let c = 1.0;
        let x0 = -0.125 + 1e-14;
        let g = -(4.0 * x0 * x0 + c * x0);
        let r = build_branch(EquationId::Gch1, p(c, g), x0, 0.1, 10, Side::Right);
        assert!(matches!(r, Err(Error::Resonance { k: 2, .. })), "{r:?}");
    }
}
