use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equation::{build_system, singular_set, EquationId, SingularSet, WaveParams};
use crate::error::{Error, Result};
use crate::phase::classify::{regular_equilibria, singular_equilibria, EquilibriumInfo};
use crate::phase::integrate::{integrate_with, IntegrateOptions, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub phi_min: f64,
    pub phi_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(phi_min: f64, phi_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let w = Self { phi_min, phi_max, y_min, y_max };
        let ok = [phi_min, phi_max, y_min, y_max].iter().all(|v| v.is_finite())
            && phi_max > phi_min
            && y_max > y_min;
        if ok { Ok(w) } else { Err(Error::InvalidInput(format!("degenerate window {w:?}"))) }
    }

    pub fn contains(&self, phi: f64, y: f64) -> bool {
        (self.phi_min..=self.phi_max).contains(&phi) && (self.y_min..=self.y_max).contains(&y)
    }

    fn inflated(&self, frac: f64) -> [f64; 4] {
        let dx = frac * (self.phi_max - self.phi_min);
        let dy = frac * (self.y_max - self.y_min);
        [self.phi_min - dx, self.phi_max + dx, self.y_min - dy, self.y_max + dy]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortraitOptions {
    pub seeds: usize,
    pub seed: u64,
    pub span: f64,
    pub tol: f64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        Self { seeds: 64, seed: 0, span: 200.0, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Portrait {
    pub equation: EquationId,
    pub params: WaveParams,
    pub window: Window,
    pub equilibria: Vec<EquilibriumInfo>,
    pub singular_set: SingularSet,
    pub trajectories: Vec<Trajectory>,
}

/// Seed points on a jittered grid covering `window`.
pub fn seed_points(window: &Window, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let cols = (count as f64).sqrt().ceil() as usize;
    let rows = count.div_ceil(cols);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = (window.phi_max - window.phi_min) / cols as f64;
    let dy = (window.y_max - window.y_min) / rows as f64;
    (0..count)
        .map(|n| {
            let (i, j) = (n % cols, n / cols);
            let jx: f64 = rng.gen_range(-0.25..0.25);
            let jy: f64 = rng.gen_range(-0.25..0.25);
            (
                window.phi_min + (i as f64 + 0.5 + jx) * dx,
                window.y_min + (j as f64 + 0.5 + jy) * dy,
            )
        })
        .collect()
}

/// Integrates every seed forward and backward until it leaves the (slightly
/// enlarged) window, closes up, or exhausts the time span.
pub fn portrait(eq: EquationId, p: WaveParams, window: Window, opts: &PortraitOptions) -> Result<Portrait> {
    Window::new(window.phi_min, window.phi_max, window.y_min, window.y_max)?;
    if opts.seeds == 0 {
        return Err(Error::InvalidInput("portrait needs at least one seed".into()));
    }
    let sys = build_system(eq, p);
    let mut iopts = IntegrateOptions::new(opts.tol);
    iopts.window = Some(window.inflated(0.05));
    iopts.max_steps = 20_000;
    let seeds = seed_points(&window, opts.seeds, opts.seed);
    let trajectories: Vec<Trajectory> = seeds
        .par_iter()
        .flat_map_iter(|&s| {
            [opts.span, -opts.span].into_iter().map(move |span| (s, span))
        })
        .map(|(s, span)| match integrate_with(&sys, s, span, &iopts, |_| false) {
            Ok(t) => t,
            Err(Error::Divergence { trajectory, .. }) => *trajectory,
            Err(e) => unreachable!("validated inputs: {e}"),
        })
        .collect();
    let mut equilibria: Vec<EquilibriumInfo> = regular_equilibria(eq, p);
    equilibria.extend(singular_equilibria(eq, p));
    equilibria.retain(|e| window.contains(e.location.0, e.location.1));
    Ok(Portrait { equation: eq, params: p, window, equilibria, singular_set: singular_set(eq, p), trajectories })
}
