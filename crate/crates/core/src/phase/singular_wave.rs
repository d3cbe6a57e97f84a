//! Peakon / cuspon classification on the singular line of GCH-I.

use serde::{Deserialize, Serialize};

use crate::equation::{singular_set, EquationId, SingularSet, WaveParams};
use crate::error::{Error, Result};
use crate::phase::classify::{regular_equilibria, EquilibriumKind};
use crate::phase::integral::first_integral;
use crate::phase::level::trace_level;

/// Level agreement needed for the boundary curve to pass through a saddle.
pub const SADDLE_LEVEL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveLabel {
    PeriodicCuspon,
    SolitaryPeakon,
    None,
}

impl WaveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            WaveLabel::PeriodicCuspon => "periodic-cuspon",
            WaveLabel::SolitaryPeakon => "solitary-peakon",
            WaveLabel::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    /// The boundary level leaves `S+`, crosses the `phi` axis at a regular
    /// point beyond a center and returns to `S-`.
    Arch,
    /// The boundary level runs from `S+` into a regular saddle.
    Triangle,
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularWaveVerdict {
    pub label: WaveLabel,
    pub h_s: Option<f64>,
    pub geometry: Geometry,
    pub singular_points: Vec<(f64, f64)>,
    /// Where the traced boundary curve met the `phi` axis or the saddle.
    pub axis_point: Option<(f64, f64)>,
}

impl SingularWaveVerdict {
    fn none(points: Vec<(f64, f64)>) -> Self {
        Self { label: WaveLabel::None, h_s: None, geometry: Geometry::NotFound, singular_points: points, axis_point: None }
    }
}

/// Labels the singular traveling waves supported at `(eq, p)`.
///
/// Only GCH-I has a peakon/cuspon structure.  GCH-II never does, and GCH-III
/// is reported as `none` here; use [`classify_singular_wave_strict`] to get an
/// error for it instead.
pub fn classify_singular_wave(eq: EquationId, p: WaveParams) -> SingularWaveVerdict {
    match eq {
        EquationId::Gch1 => classify_gch1(p),
        EquationId::Gch2 | EquationId::Gch3 => SingularWaveVerdict::none(Vec::new()),
    }
}

pub fn classify_singular_wave_strict(eq: EquationId, p: WaveParams) -> Result<SingularWaveVerdict> {
    match eq {
        EquationId::Gch3 => Err(Error::UnsupportedEquation("singular-wave classification of gch3")),
        _ => Ok(classify_singular_wave(eq, p)),
    }
}

fn classify_gch1(p: WaveParams) -> SingularWaveVerdict {
    let set = singular_set(EquationId::Gch1, p);
    let SingularSet::VerticalLine { phi_s, y_sq, ref points } = set else { unreachable!() };
    let points = points.clone();
    if y_sq <= 0.0 {
        return SingularWaveVerdict::none(points);
    }
    let y_top = y_sq.sqrt();
    let h = first_integral(EquationId::Gch1, p);
    let h_s = h.value_at(phi_s, y_top);

    let eqs = regular_equilibria(EquationId::Gch1, p);
    let Some(center) = eqs
        .iter()
        .filter(|e| e.kind == EquilibriumKind::Center)
        .map(|e| e.location.0)
        .min_by(|a, b| (a - phi_s).abs().total_cmp(&(b - phi_s).abs()))
    else {
        return SingularWaveVerdict { h_s: Some(h_s), ..SingularWaveVerdict::none(points) };
    };
    let side = (center - phi_s).signum();
    // H scales like c^4.
    let level_tol = SADDLE_LEVEL_TOL * p.c().powi(4).max(1.0);
    let saddles: Vec<f64> = eqs
        .iter()
        .filter(|e| e.kind == EquilibriumKind::Saddle)
        .map(|e| e.location.0)
        .filter(|s| (h.value_at(*s, 0.0) - h_s).abs() <= level_tol)
        .collect();

    let scale = p.c().abs().max(y_top).max((center - phi_s).abs());
    let step = 1e-3 * scale;

    // The singular line itself lies in the level set, so start just off it on
    // the transversal branch through S+.
    let phi_start = phi_s + side * step;
    let mut y = y_top;
    for _ in 0..50 {
        let r = h.value_at(phi_start, y) - h_s;
        let dy = h.gradient(phi_start, y)[1];
        if dy == 0.0 {
            break;
        }
        y -= r / dy;
    }
    if !y.is_finite() || (y - y_top).abs() > 0.5 * y_top {
        return SingularWaveVerdict { h_s: Some(h_s), ..SingularWaveVerdict::none(points) };
    }

    let mut hit_saddle = None;
    let trace = trace_level(&h, h_s, (phi_start, y), (side, 0.0), step, 200_000, |_, q| {
        if let Some(s) = saddles.iter().find(|s| (q.0 - **s).hypot(q.1) <= 5.0 * step) {
            hit_saddle = Some(*s);
            return true;
        }
        q.1 <= 0.0 || (q.0 - phi_s) * side <= 0.0 || q.0.hypot(q.1) > 1e3 * scale
    });
    let end = *trace.points.last().unwrap();
    if let Some(s) = hit_saddle {
        return SingularWaveVerdict {
            label: WaveLabel::SolitaryPeakon,
            h_s: Some(h_s),
            geometry: Geometry::Triangle,
            singular_points: points,
            axis_point: Some((s, 0.0)),
        };
    }
    let crossed_axis = trace.stopped && end.1 <= 0.0 && (end.0 - phi_s) * side > 0.0;
    // The arch must enclose the center between the line and its axis point.
    if crossed_axis && (end.0 - phi_s).abs() > (center - phi_s).abs() {
        return SingularWaveVerdict {
            label: WaveLabel::PeriodicCuspon,
            h_s: Some(h_s),
            geometry: Geometry::Arch,
            singular_points: points,
            axis_point: Some((end.0, 0.0)),
        };
    }
    SingularWaveVerdict { h_s: Some(h_s), ..SingularWaveVerdict::none(points) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(eq: EquationId, c: f64, g: f64) -> WaveLabel {
        classify_singular_wave(eq, WaveParams::new(c, g).unwrap()).label
    }

    #[test]
    fn peakon_at_zero_g() {
        assert_eq!(label(EquationId::Gch1, 1.0, 0.0), WaveLabel::SolitaryPeakon);
        assert_eq!(label(EquationId::Gch1, -1.0, 0.0), WaveLabel::SolitaryPeakon);
    }

    #[test]
    fn cuspon_for_small_negative_g() {
        let v = classify_singular_wave(EquationId::Gch1, WaveParams::new(-1.0, -0.005).unwrap());
        assert_eq!(v.label, WaveLabel::PeriodicCuspon);
        assert_eq!(v.geometry, Geometry::Arch);
        assert!((v.h_s.unwrap() + 0.0025).abs() < 1e-12);
        assert_eq!(label(EquationId::Gch1, 1.0, -0.005), WaveLabel::PeriodicCuspon);
    }

    #[test]
    fn no_singular_points_means_none() {
        // Y = (c^2 + 2g)/4 < 0.
        assert_eq!(label(EquationId::Gch1, 1.0, -0.6), WaveLabel::None);
    }

    #[test]
    fn other_equations() {
        assert_eq!(label(EquationId::Gch2, 3.0, 0.1), WaveLabel::None);
        assert_eq!(label(EquationId::Gch3, 1.0, 0.0), WaveLabel::None);
        assert!(classify_singular_wave_strict(EquationId::Gch3, WaveParams::new(1.0, 0.0).unwrap()).is_err());
    }
}
