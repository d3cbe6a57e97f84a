//! Phase-plane analysis of the regularized systems.

mod classify;
mod gstar;
mod integral;
mod integrate;
mod level;
mod portrait;
mod singular_wave;

pub use classify::{
    classify_equilibrium, regular_equilibria, singular_equilibria, EquilibriumInfo,
    EquilibriumKind, Origin,
};
pub use gstar::{gstar, hyperbola_intersections, GStar, HyperbolaIntersection};
pub use integral::{first_integral, FirstIntegral};
pub use integrate::{
    integrate_regularized, integrate_with, Crossing, IntegrateOptions, Sample, Termination,
    Trajectory,
};
pub use level::{trace_level, LevelTrace};
pub use portrait::{portrait, Portrait, PortraitOptions, Window};
pub use singular_wave::{
    classify_singular_wave, classify_singular_wave_strict, Geometry, SingularWaveVerdict,
    WaveLabel,
};
