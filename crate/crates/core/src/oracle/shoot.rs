//! Direct integration along the saddle separatrices, as an orbit-level check
//! on the series branches and as the test for homoclinic loops.

use serde::{Deserialize, Serialize};

use crate::equation::{build_system, equilibria, EquationId, PlanarSystem, WaveParams};
use crate::error::{Error, Result};
use crate::phase::{classify_equilibrium, integrate_with, EquilibriumKind, IntegrateOptions, Origin, Trajectory};
use crate::series::{saddle_eigenvalues, SeriesBranch, Side};

/// A shot orbit counts as homoclinic when it comes back this close to the
/// saddle after leaving its neighbourhood.
pub const RETURN_TOL: f64 = 1e-3;
/// Distance from the saddle that marks the orbit as having left.
const LEAVE_RADIUS: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Unstable,
    Stable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootReport {
    pub x0: f64,
    pub manifold: Manifold,
    /// Sign of the displacement along the eigenvector (`+1` toward larger phi).
    pub direction: f64,
    pub offset: f64,
    pub trajectory: Trajectory,
    /// Closest approach to the saddle after leaving its neighbourhood;
    /// infinite if the orbit never left or never came back.
    pub return_distance: f64,
    pub returned: bool,
    /// One-sided Hausdorff distance from the series orbit to the shot orbit.
    pub series_distance: Option<f64>,
}

fn check_saddle(eq: EquationId, p: WaveParams, x0: f64) -> Result<()> {
    let info = classify_equilibrium(eq, p, (x0, 0.0))?;
    if info.kind != EquilibriumKind::Saddle || info.origin != Origin::Regular {
        return Err(Error::NotASaddle { x0, radicand: f64::NAN });
    }
    Ok(())
}

fn shoot(
    sys: &PlanarSystem,
    x0: f64,
    rate: f64,
    direction: f64,
    offset: f64,
    tol: f64,
) -> Result<(Trajectory, f64)> {
    let norm = rate.hypot(1.0);
    let start = (x0 + direction * offset / norm, direction * offset * rate / norm);
    // dz = D dzeta near the saddle; unstable means forward in z.
    let d0 = sys.denominator.eval(x0, 0.0);
    let z_dir = if rate > 0.0 { 1.0 } else { -1.0 };
    let zeta_dir = z_dir * d0.signum();
    let speed = (rate * d0).abs();
    let span = zeta_dir * 400.0 / speed;
    let scale = 1.0 + x0.abs() + sys.params.c().abs();
    let w = 20.0 * scale;
    let mut opts = IntegrateOptions::new(tol);
    opts.detect_closed_orbit = false;
    opts.window = Some([x0 - w, x0 + w, -w, w]);
    opts.max_steps = 400_000;
    let mut left = false;
    let mut best = f64::INFINITY;
    let traj = integrate_with(sys, start, span, &opts, |s| {
        let d = (s.phi - x0).hypot(s.y);
        if d > LEAVE_RADIUS {
            left = true;
        }
        if left {
            best = best.min(d);
        }
        left && d < 0.1 * RETURN_TOL
    })?;
    if traj.terminated_by == crate::phase::Termination::LeftWindow {
        return Err(Error::Divergence { limit: w, trajectory: Box::new(traj) });
    }
    Ok((traj, best))
}

/// Shoots along the unstable manifold of the regular saddle `x0` on both
/// sides and reports the side that comes closer to returning.
pub fn manifold_shoot(eq: EquationId, p: WaveParams, x0: f64, offset: f64, tol: f64) -> Result<ShootReport> {
    if !(1e-8..=1e-4).contains(&offset) {
        return Err(Error::InvalidInput(format!("offset {offset} outside [1e-8, 1e-4]")));
    }
    check_saddle(eq, p, x0)?;
    let (plus, _) = saddle_eigenvalues(eq, p, x0)?;
    let sys = build_system(eq, p);
    let mut best: Option<ShootReport> = None;
    let mut first_err = None;
    for direction in [1.0, -1.0] {
        match shoot(&sys, x0, plus, direction, offset, tol) {
            Ok((trajectory, ret)) => {
                let rep = ShootReport {
                    x0,
                    manifold: Manifold::Unstable,
                    direction,
                    offset,
                    trajectory,
                    return_distance: ret,
                    returned: ret <= RETURN_TOL,
                    series_distance: None,
                };
                if best.as_ref().is_none_or(|b| rep.return_distance < b.return_distance) {
                    best = Some(rep);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (best, first_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!(),
    }
}

/// Shoots along the manifold that `branch` parametrizes (unstable for a left
/// branch, stable for a right branch, on the side of the leading coefficient)
/// and measures how far the series orbit strays from the shot orbit.
pub fn shoot_for_branch(
    eq: EquationId,
    p: WaveParams,
    branch: &SeriesBranch,
    offset: f64,
    tol: f64,
) -> Result<ShootReport> {
    if !(1e-8..=1e-4).contains(&offset) {
        return Err(Error::InvalidInput(format!("offset {offset} outside [1e-8, 1e-4]")));
    }
    check_saddle(eq, p, branch.x0)?;
    let sys = build_system(eq, p);
    let direction = branch.leading().signum();
    let (trajectory, ret) = match shoot(&sys, branch.x0, branch.exponent, direction, offset, tol) {
        Ok(v) => v,
        Err(Error::Divergence { trajectory, .. }) => (*trajectory, f64::INFINITY),
        Err(e) => return Err(e),
    };
    let dist = hausdorff_to_polyline(branch, &trajectory, offset);
    Ok(ShootReport {
        x0: branch.x0,
        manifold: if branch.side == Side::Left { Manifold::Unstable } else { Manifold::Stable },
        direction,
        offset,
        trajectory,
        return_distance: ret,
        returned: ret <= RETURN_TOL,
        series_distance: Some(dist),
    })
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0) };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn hausdorff_to_polyline(branch: &SeriesBranch, traj: &Trajectory, offset: f64) -> f64 {
    // Densify the trajectory with its Hermite interpolant.
    let mut poly = Vec::with_capacity(traj.samples.len() * 8);
    for w in traj.samples.windows(2) {
        for s in 0..8 {
            let z = w[0].zeta + (w[1].zeta - w[0].zeta) * s as f64 / 8.0;
            poly.push(traj.dense(z).unwrap_or((w[0].phi, w[0].y)));
        }
    }
    let e = traj.end();
    poly.push((e.phi, e.y));

    // Series samples from where the displacement is about `offset` to z = 0.
    let lead = branch.leading().abs().max(f64::MIN_POSITIVE);
    let z_far = (offset / lead).ln() / branch.exponent;
    let n = 400;
    (0..=n)
        .map(|i| z_far * (1.0 - i as f64 / n as f64))
        .map(|z| {
            let (f, d1, _) = branch.derivatives(z);
            poly.windows(2).map(|s| segment_distance((f, d1), s[0], s[1])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// The regular saddle whose unstable manifold returns to it, smallest `|x0|`
/// first.  `None` when no saddle returns.
pub fn auto_saddle(eq: EquationId, p: WaveParams, offset: f64, tol: f64) -> Result<Option<ShootReport>> {
    let mut cands: Vec<f64> = equilibria(eq, p).iter().map(|r| r.value).collect();
    cands.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    for x0 in cands {
        if check_saddle(eq, p, x0).is_err() {
            continue;
        }
        match manifold_shoot(eq, p, x0, offset, tol) {
            Ok(r) if r.returned => return Ok(Some(r)),
            Ok(_) | Err(Error::Divergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
