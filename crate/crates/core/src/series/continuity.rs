use crate::equation::{EquationId, WaveParams};
use crate::error::Result;
use crate::poly::{horner, real_roots};
use crate::series::branch::{normalized_coefficients, Side};
use crate::series::recurrence::ForcingSign;

/// Ascending coefficients of `x0 - target + sum_k phi_k a^k`.
pub fn continuity_polynomial(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    m: usize,
    target: f64,
    side: Side,
    sign: ForcingSign,
) -> Result<Vec<f64>> {
    let (_, phi) = normalized_coefficients(eq, p, x0, m, side, sign)?;
    let mut coef = Vec::with_capacity(m + 1);
    coef.push(x0 - target);
    coef.extend(phi);
    Ok(coef)
}

/// Real leading coefficients `a_1` of the right branch for which
/// `phi(0) = target`.
pub fn solve_continuity(eq: EquationId, p: WaveParams, x0: f64, m: usize, target: f64) -> Result<Vec<f64>> {
    solve_continuity_with(eq, p, x0, m, target, Side::Right, ForcingSign::Standard)
}

/// As [`solve_continuity`], for either side and sign convention.  The zero
/// root (present only when `x0 = target`) is dropped.
pub fn solve_continuity_with(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    m: usize,
    target: f64,
    side: Side,
    sign: ForcingSign,
) -> Result<Vec<f64>> {
    let coef = continuity_polynomial(eq, p, x0, m, target, side, sign)?;
    let mut roots: Vec<f64> = real_roots(&coef)
        .into_iter()
        .map(|r| polish(&coef, r))
        .filter(|r| *r != 0.0)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Ok(roots)
}

fn polish(coef: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let (v, d) = horner(coef, x);
        if d == 0.0 || v == 0.0 {
            break;
        }
        let nx = x - v / d;
        if !nx.is_finite() || (nx - x).abs() > 1e-3 * (1.0 + x.abs()) {
            break;
        }
        let done = (nx - x).abs() <= 4.0 * f64::EPSILON * x.abs();
        x = nx;
        if done {
            break;
        }
    }
    x
}
