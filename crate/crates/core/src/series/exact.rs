//! Closed-form solutions of the GCH-III traveling ODE at `g = 0`, where it
//! factors as `(c - phi^2 + phi'^2)(phi'' - phi) = 0`.

use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};
use crate::error::{Error, Result};

/// One of the three families, each of the form `A e^z + B e^{-z}`:
///
/// 1. `k1 e^z + k2 e^{-z}`
/// 2. `(1/4) e^{-z-k3} (4c e^{2z} + e^{2 k4})`
/// 3. `(1/4) e^{-z-k5} (4c e^{2z} + e^{2z + 2 k6})`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactG0Solution {
    pub family: u8,
    pub constants: [f64; 2],
    pub c: f64,
}

impl ExactG0Solution {
    /// `(A, B)` in `A e^z + B e^{-z}`.
    pub fn amplitudes(&self) -> (f64, f64) {
        let [k_a, k_b] = self.constants;
        let c = self.c;
        match self.family {
            1 => (k_a, k_b),
            2 => (c * (-k_a).exp(), 0.25 * (2.0 * k_b - k_a).exp()),
            _ => (0.25 * (-k_a).exp() * (4.0 * c + (2.0 * k_b).exp()), 0.0),
        }
    }

    pub fn derivatives(&self, z: f64) -> (f64, f64, f64) {
        let (a, b) = self.amplitudes();
        let (ep, em) = (a * z.exp(), b * (-z).exp());
        (ep + em, ep - em, ep + em)
    }

    pub fn value(&self, z: f64) -> f64 {
        self.derivatives(z).0
    }
}

pub fn exact_g0(eq: EquationId, p: WaveParams, family: u8, constants: [f64; 2]) -> Result<ExactG0Solution> {
    if eq != EquationId::Gch3 || p.g() != 0.0 {
        return Err(Error::ExactRequiresG0);
    }
    if !(1..=3).contains(&family) {
        return Err(Error::InvalidFamily(family));
    }
    if constants.iter().any(|k| !k.is_finite()) {
        return Err(Error::NonFinite("exact-solution constants"));
    }
    Ok(ExactG0Solution { family, constants, c: p.c() })
}
