use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gchtw_core::phase::{EquilibriumKind, Origin, Portrait, Termination};
use gchtw_core::SingularSet;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    if v.is_finite() { format!("{v:.16e}") } else { v.to_string() }
}

fn ensure_parent(path: &Path) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    ensure_parent(path)?;
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Json { path: path.into(), source: e })?;
    s.push('\n');
    fs::write(path, s).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<(T, Vec<u8>)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| CliError::Json { path: path.into(), source: e })?;
    Ok((value, bytes))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("in-memory serialization")
}

/// CSV with a header row; numeric fields are formatted by [`num`].
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        ensure_parent(path)?;
        fs::write(path, self.to_bytes()?).map_err(|e| CliError::io(path, e))
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn portrait_svg(pt: &Portrait) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const PAD: f64 = 40.0;
    let win = pt.window;
    let sx = |phi: f64| PAD + (phi - win.phi_min) / (win.phi_max - win.phi_min) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - win.y_min) / (win.y_max - win.y_min) * (H - 2.0 * PAD);
    let inside = |phi: f64, y: f64| win.contains(phi, y);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{} c={} g={}  phi in [{}, {}], y in [{}, {}]</text>"#,
        pt.equation,
        pt.params.c(),
        pt.params.g(),
        win.phi_min,
        win.phi_max,
        win.y_min,
        win.y_max
    );

    let polyline = |pts: &[(f64, f64)], style: &str, s: &mut String| {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts.iter().map(|&(p, y)| format!("{:.2},{:.2}", sx(p), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" {style} points="{}"/>"#, coords.join(" "));
    };

    for tr in &pt.trajectories {
        let color = if tr.terminated_by == Termination::ClosedOrbitDetected { "#1f77b4" } else { "#555555" };
        let mut run: Vec<(f64, f64)> = Vec::new();
        for smp in &tr.samples {
            if inside(smp.phi, smp.y) {
                run.push((smp.phi, smp.y));
            } else {
                polyline(&run, &format!(r##"stroke="{color}" stroke-width="0.8""##), &mut s);
                run.clear();
            }
        }
        polyline(&run, &format!(r##"stroke="{color}" stroke-width="0.8""##), &mut s);
    }

    let singular_style = r##"stroke="#d62728" stroke-width="1.5" stroke-dasharray="6,4""##;
    match &pt.singular_set {
        SingularSet::VerticalLine { phi_s, .. } => {
            polyline(&[(*phi_s, win.y_min), (*phi_s, win.y_max)], singular_style, &mut s);
        }
        SingularSet::StraightLine { a, b, d } => {
            let pts: Vec<(f64, f64)> = if b.abs() > a.abs() {
                [win.phi_min, win.phi_max].iter().map(|&p| (p, -(a * p + d) / b)).collect()
            } else {
                [win.y_min, win.y_max].iter().map(|&y| (-(b * y + d) / a, y)).collect()
            };
            polyline(&pts, singular_style, &mut s);
        }
        SingularSet::Hyperbola { c } => {
            // phi^2 - y^2 = c, sampled by y (c > 0) or by phi (c < 0).
            let n = 200;
            for sign in [-1.0, 1.0] {
                let pts: Vec<(f64, f64)> = (0..=n)
                    .map(|i| {
                        if *c > 0.0 {
                            let y = win.y_min + (win.y_max - win.y_min) * i as f64 / n as f64;
                            (sign * (c + y * y).sqrt(), y)
                        } else {
                            let p = win.phi_min + (win.phi_max - win.phi_min) * i as f64 / n as f64;
                            (p, sign * (p * p - c).sqrt())
                        }
                    })
                    .collect();
                let clipped: Vec<(f64, f64)> = pts.into_iter().filter(|&(p, y)| inside(p, y)).collect();
                polyline(&clipped, singular_style, &mut s);
            }
        }
    }

    for e in &pt.equilibria {
        let (x, y) = (sx(e.location.0), sy(e.location.1));
        let fill = match e.kind {
            EquilibriumKind::Saddle => "#d62728",
            EquilibriumKind::Center => "#2ca02c",
            _ => "#9467bd",
        };
        match e.origin {
            Origin::Regular => {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"/>"#);
            }
            Origin::Singular => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="{fill}"/>"#,
                    x - 4.0,
                    y - 4.0
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
