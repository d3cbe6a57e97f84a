//! Predictor-corrector continuation of level curves `H(phi, y) = h`.

use serde::{Deserialize, Serialize};

use crate::phase::integral::FirstIntegral;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub level: f64,
    pub points: Vec<(f64, f64)>,
    /// Whether `stop` ended the trace (as opposed to the step budget or a
    /// vanishing gradient).
    pub stopped: bool,
}

fn newton_correct(h: &FirstIntegral, level: f64, mut p: (f64, f64)) -> Option<(f64, f64)> {
    for _ in 0..20 {
        let r = h.value_at(p.0, p.1) - level;
        let [gx, gy] = h.gradient(p.0, p.1);
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 || !g2.is_finite() {
            return None;
        }
        p = (p.0 - r * gx / g2, p.1 - r * gy / g2);
        if r.abs() <= 1e-15 * h.scale_at(p.0, p.1) {
            break;
        }
    }
    Some(p)
}

/// Follows the level set through `start` with arc-length steps of `step`,
/// heading initially along `direction` (projected onto the tangent).
///
/// Each step predicts along the unit tangent and corrects by Newton's method
/// along the gradient, orthogonal to the tangent.  Tracing ends when
/// `stop(previous, current)` holds, after `max_steps`, or where the gradient
/// vanishes.
pub fn trace_level<F>(
    h: &FirstIntegral,
    level: f64,
    start: (f64, f64),
    direction: (f64, f64),
    step: f64,
    max_steps: usize,
    mut stop: F,
) -> LevelTrace
where
    F: FnMut((f64, f64), (f64, f64)) -> bool,
{
    let mut points = vec![start];
    let mut p = start;
    let mut heading = direction;
    for _ in 0..max_steps {
        let [gx, gy] = h.gradient(p.0, p.1);
        let gn = gx.hypot(gy);
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let mut t = (-gy / gn, gx / gn);
        if t.0 * heading.0 + t.1 * heading.1 < 0.0 {
            t = (-t.0, -t.1);
        }
        let pred = (p.0 + step * t.0, p.1 + step * t.1);
        let Some(q) = newton_correct(h, level, pred) else { break };
        heading = (q.0 - p.0, q.1 - p.1);
        let prev = p;
        p = q;
        points.push(p);
        if stop(prev, p) {
            return LevelTrace { level, points, stopped: true };
        }
    }
    LevelTrace { level, points, stopped: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::{EquationId, WaveParams};
    use crate::phase::integral::first_integral;

    #[test]
    fn traces_stay_on_level() {
        let h = first_integral(EquationId::Gch3, WaveParams::new(2.0, 0.8).unwrap());
        let center = 1.139186;
        let start = (center + 0.05, 0.0);
        let level = h.value_at(start.0, start.1);
        let tr = trace_level(&h, level, start, (0.0, 1.0), 1e-3, 5000, |a, b| a.1 > 0.0 && b.1 <= 0.0);
        assert!(tr.stopped);
        for &(x, y) in &tr.points {
            assert!((h.value_at(x, y) - level).abs() <= 1e-12);
        }
        // Half of the closed orbit ends on the far side of the center.
        assert!(tr.points.last().unwrap().0 < center);
    }
}
