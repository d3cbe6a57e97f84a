//! Dormand-Prince 5(4) integration of the regularized planar flow.

use serde::{Deserialize, Serialize};

use crate::equation::{build_system, EquationId, PlanarSystem, WaveParams};
use crate::error::{Error, Result};
use crate::phase::classify::{regular_equilibria, EquilibriumKind};
use crate::phase::integral::{first_integral, FirstIntegral};

pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub zeta: f64,
    pub phi: f64,
    pub y: f64,
}

/// A point where the trajectory crosses the singular set (the denominator
/// changes sign).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub zeta: f64,
    pub phi: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    TimeLimit,
    SingularCrossing,
    Divergence,
    ClosedOrbitDetected,
    LeftWindow,
    StepLimit,
    Stopped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Slopes of the regularized field at each sample, kept for dense output.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slopes: Vec<[f64; 2]>,
    pub h_drift: f64,
    pub terminated_by: Termination,
    pub crossings: Vec<Crossing>,
    pub tol: f64,
}

impl Trajectory {
    pub fn start(&self) -> Sample {
        self.samples[0]
    }

    pub fn end(&self) -> Sample {
        *self.samples.last().expect("trajectory has at least one sample")
    }

    /// Cubic Hermite interpolation between stored samples.
    pub fn dense(&self, zeta: f64) -> Option<(f64, f64)> {
        if self.slopes.len() != self.samples.len() {
            return None;
        }
        let forward = self.end().zeta >= self.start().zeta;
        let idx = self.samples.windows(2).position(|w| {
            let (a, b) = (w[0].zeta, w[1].zeta);
            if forward { a <= zeta && zeta <= b } else { b <= zeta && zeta <= a }
        })?;
        let (s0, s1) = (self.samples[idx], self.samples[idx + 1]);
        let (f0, f1) = (self.slopes[idx], self.slopes[idx + 1]);
        let p = hermite([s0.phi, s0.y], f0, [s1.phi, s1.y], f1, s1.zeta - s0.zeta, zeta - s0.zeta);
        Some((p[0], p[1]))
    }

    pub fn path_length(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].phi - w[0].phi).hypot(w[1].y - w[0].y)).sum()
    }
}

fn hermite(x0: [f64; 2], f0: [f64; 2], x1: [f64; 2], f1: [f64; 2], h: f64, t: f64) -> [f64; 2] {
    if h == 0.0 {
        return x0;
    }
    let s = t / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let mut out = [0.0; 2];
    for i in 0..2 {
        out[i] = h00 * x0[i] + h10 * h * f0[i] + h01 * x1[i] + h11 * h * f1[i];
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrateOptions {
    pub tol: f64,
    pub max_steps: usize,
    pub stop_at_singular: bool,
    pub detect_closed_orbit: bool,
    /// Axis-aligned box `[phi_min, phi_max, y_min, y_max]`; leaving it ends the
    /// run.
    pub window: Option<[f64; 4]>,
    pub initial_step: Option<f64>,
}

impl IntegrateOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            max_steps: 200_000,
            stop_at_singular: false,
            detect_closed_orbit: true,
            window: None,
            initial_step: None,
        }
    }
}

// Dormand-Prince tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates the regularized system of `eq` from `start` over the signed
/// regularized-time interval `[0, span]` with default options.
pub fn integrate_regularized(
    eq: EquationId,
    p: WaveParams,
    start: (f64, f64),
    span: f64,
    tol: f64,
) -> Result<Trajectory> {
    let sys = build_system(eq, p);
    integrate_with(&sys, start, span, &IntegrateOptions::new(tol), |_| false)
}

/// Integrates with explicit options.  `stop` is consulted after every
/// accepted step and ends the run with [`Termination::Stopped`] when it
/// returns `true`.
pub fn integrate_with<F>(
    sys: &PlanarSystem,
    start: (f64, f64),
    span: f64,
    opts: &IntegrateOptions,
    mut stop: F,
) -> Result<Trajectory>
where
    F: FnMut(&Sample) -> bool,
{
    if !(1e-12..=1e-3).contains(&opts.tol) {
        return Err(Error::InvalidInput(format!("tolerance {} outside [1e-12, 1e-3]", opts.tol)));
    }
    if !start.0.is_finite() || !start.1.is_finite() || !span.is_finite() {
        return Err(Error::NonFinite("start or span"));
    }
    let tol = opts.tol;
    let h_int: FirstIntegral = first_integral(sys.equation, sys.params);
    let rhs = |x: [f64; 2]| sys.regularized_rhs(x[0], x[1]);
    let den = |x: [f64; 2]| sys.denominator.eval(x[0], x[1]);

    let dir = if span >= 0.0 { 1.0 } else { -1.0 };
    let end = span.abs();
    let mut x = [start.0, start.1];
    let mut f = rhs(x);
    let h0 = first_integral_value(&h_int, x);
    let mut t = 0.0f64;
    let mut samples = vec![Sample { zeta: 0.0, phi: x[0], y: x[1] }];
    let mut slopes = vec![f];
    let mut crossings = Vec::new();
    let mut drift = 0.0f64;

    let center = if opts.detect_closed_orbit {
        regular_equilibria(sys.equation, sys.params)
            .into_iter()
            .filter(|e| e.kind == EquilibriumKind::Center)
            .map(|e| e.location)
            .min_by(|a, b| {
                let da = (a.0 - x[0]).hypot(a.1 - x[1]);
                let db = (b.0 - x[0]).hypot(b.1 - x[1]);
                da.total_cmp(&db)
            })
    } else {
        None
    };
    let angle = |x: [f64; 2], c: (f64, f64)| (x[1] - c.1).atan2(x[0] - c.0);
    let mut winding = 0.0f64;
    let mut last_angle = center.map(|c| angle(x, c));
    let dist0 = |x: [f64; 2]| (x[0] - start.0).hypot(x[1] - start.1);
    let mut path = 0.0f64;
    let mut prev_d = [f64::INFINITY; 2];

    let scale = 1.0 + x[0].abs().max(x[1].abs());
    let fnorm = f[0].hypot(f[1]);
    let mut h = opts.initial_step.unwrap_or_else(|| {
        if fnorm > 0.0 { (0.01 * scale / fnorm).min(end.max(1e-12)) } else { end.max(1e-12) }
    });
    let mut steps = 0usize;
    let mut terminated = Termination::TimeLimit;

    let finish = |samples: Vec<Sample>, slopes, crossings, drift, term| Trajectory {
        samples,
        slopes,
        h_drift: drift,
        terminated_by: term,
        crossings,
        tol,
    };

    while t < end {
        if steps >= opts.max_steps {
            terminated = Termination::StepLimit;
            break;
        }
        h = h.min(end - t);
        let hs = dir * h;
        let mut k = [[0.0f64; 2]; 7];
        k[0] = f;
        for s in 1..7 {
            let mut xs = x;
            for (j, kj) in k.iter().enumerate().take(s) {
                xs[0] += hs * A[s][j] * kj[0];
                xs[1] += hs * A[s][j] * kj[1];
            }
            k[s] = rhs(xs);
        }
        let mut x5 = x;
        let mut err = [0.0f64; 2];
        for s in 0..7 {
            for i in 0..2 {
                x5[i] += hs * B5[s] * k[s][i];
                err[i] += hs * (B5[s] - B4[s]) * k[s][i];
            }
        }
        let mut en = 0.0f64;
        for i in 0..2 {
            let sc = tol + tol * x[i].abs().max(x5[i].abs());
            en = en.max((err[i] / sc).abs());
        }
        if !en.is_finite() {
            h *= 0.1;
            if h < 1e-300 {
                let traj = finish(samples, slopes, crossings, drift, Termination::Divergence);
                return Err(Error::Divergence { limit: DIVERGENCE_LIMIT, trajectory: Box::new(traj) });
            }
            continue;
        }
        if en > 1.0 {
            h *= (0.9 * en.powf(-0.2)).max(0.2);
            continue;
        }
        // Accepted step; k[6] is the slope at x5 (FSAL).
        steps += 1;
        let f5 = k[6];
        let d_before = den(x);
        let d_after = den(x5);
        if d_before != 0.0 && d_before.signum() != d_after.signum() {
            // Locate the crossing on the Hermite interpolant.
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let xm = hermite(x, f, x5, f5, hs, dir * mid);
                if den(xm).signum() == d_before.signum() { lo = mid } else { hi = mid }
            }
            let xm = hermite(x, f, x5, f5, hs, dir * hi);
            crossings.push(Crossing { zeta: dir * (t + hi), phi: xm[0], y: xm[1] });
        }
        t += h;
        path += (x5[0] - x[0]).hypot(x5[1] - x[1]);
        x = x5;
        f = f5;
        let sample = Sample { zeta: dir * t, phi: x[0], y: x[1] };
        samples.push(sample);
        slopes.push(f);
        drift = drift.max((first_integral_value(&h_int, x) - h0).abs());

        if x[0].hypot(x[1]) > DIVERGENCE_LIMIT {
            let traj = finish(samples, slopes, crossings, drift, Termination::Divergence);
            return Err(Error::Divergence { limit: DIVERGENCE_LIMIT, trajectory: Box::new(traj) });
        }
        if opts.stop_at_singular && !crossings.is_empty() {
            terminated = Termination::SingularCrossing;
            break;
        }
        if let Some(w) = opts.window {
            if x[0] < w[0] || x[0] > w[1] || x[1] < w[2] || x[1] > w[3] {
                terminated = Termination::LeftWindow;
                break;
            }
        }
        if let (Some(c), Some(a0)) = (center, last_angle) {
            let a1 = angle(x, c);
            let mut da = a1 - a0;
            if da > std::f64::consts::PI {
                da -= 2.0 * std::f64::consts::PI;
            } else if da < -std::f64::consts::PI {
                da += 2.0 * std::f64::consts::PI;
            }
            winding += da;
            last_angle = Some(a1);
            if winding.abs() >= std::f64::consts::PI {
                let d = dist0(x);
                // Local minimum of the distance to the start at the previous
                // sample: refine on the two adjacent Hermite pieces.
                if prev_d[1] < prev_d[0] && prev_d[1] <= d {
                    let best = refine_min_distance(&samples, &slopes, start);
                    if best <= 10.0 * tol * path.max(1.0) {
                        terminated = Termination::ClosedOrbitDetected;
                        break;
                    }
                }
                prev_d = [prev_d[1], d];
            }
        }
        if stop(&sample) {
            terminated = Termination::Stopped;
            break;
        }

        let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    Ok(finish(samples, slopes, crossings, drift, terminated))
}

fn first_integral_value(h: &FirstIntegral, x: [f64; 2]) -> f64 {
    h.value_at(x[0], x[1])
}

/// Minimum distance to `start` over the last three samples, by golden-section
/// search on each Hermite piece.
fn refine_min_distance(samples: &[Sample], slopes: &[[f64; 2]], start: (f64, f64)) -> f64 {
    let n = samples.len();
    let mut best = f64::INFINITY;
    for i in n.saturating_sub(3)..n - 1 {
        let (s0, s1) = (samples[i], samples[i + 1]);
        let hs = s1.zeta - s0.zeta;
        let d = |t: f64| {
            let p = hermite([s0.phi, s0.y], slopes[i], [s1.phi, s1.y], slopes[i + 1], hs, t);
            (p[0] - start.0).hypot(p[1] - start.1)
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (0.0f64.min(hs), 0.0f64.max(hs));
        for _ in 0..80 {
            let c = b - g * (b - a);
            let e = a + g * (b - a);
            if d(c) < d(e) { b = e } else { a = c }
        }
        best = best.min(d(0.5 * (a + b))).min(d(0.0)).min(d(hs));
    }
    best
}
