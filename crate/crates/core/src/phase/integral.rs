use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};
use crate::poly::Poly2;

/// Polynomial first integral `H(phi, y)` of the regularized flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegral {
    pub equation: EquationId,
    pub params: WaveParams,
    pub poly: Poly2,
}

impl FirstIntegral {
    pub fn value_at(&self, phi: f64, y: f64) -> f64 {
        self.poly.eval(phi, y)
    }

    pub fn gradient(&self, phi: f64, y: f64) -> [f64; 2] {
        [self.poly.d_phi().eval(phi, y), self.poly.d_y().eval(phi, y)]
    }

    /// A magnitude for relative comparisons of `H` values near `(phi, y)`.
    pub fn scale_at(&self, phi: f64, y: f64) -> f64 {
        let r = 1.0 + phi.abs() + y.abs();
        self.poly.terms().map(|(i, j, v)| v.abs() * r.powi((i + j) as i32)).sum::<f64>()
    }
}

pub fn first_integral(eq: EquationId, p: WaveParams) -> FirstIntegral {
    let (c, g) = (p.c(), p.g());
    let poly = match eq {
        // y^2 G^2 + 2 \int G F dphi with G = c + 2 phi, F = -(4 phi^2 + c phi + g).
        EquationId::Gch1 => Poly2::from_terms(&[
            (0, 2, c * c),
            (1, 2, 4.0 * c),
            (2, 2, 4.0),
            (4, 0, -4.0),
            (3, 0, -4.0 * c),
            (2, 0, -(c * c + 2.0 * g)),
            (1, 0, -2.0 * c * g),
        ]),
        // H_y = y f, H_phi = -Q.
        EquationId::Gch2 => Poly2::from_terms(&[
            (0, 2, c / 2.0),
            (1, 2, 2.0),
            (0, 3, -2.0 / 3.0),
            (3, 0, -8.0 / 3.0),
            (2, 0, -c / 2.0),
            (1, 0, -g),
        ]),
        EquationId::Gch3 => Poly2::from_terms(&[
            (0, 2, c / 2.0),
            (2, 2, -0.5),
            (0, 4, 0.25),
            (2, 0, -c / 2.0),
            (1, 0, g),
            (4, 0, 0.25),
        ]),
    };
    FirstIntegral { equation: eq, params: p, poly }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::build_system;

    #[test]
    fn flow_invariance_as_polynomial_identity() {
        for eq in EquationId::ALL {
            let p = WaveParams::new(-0.7, 0.31).unwrap();
            let h = first_integral(eq, p);
            let s = build_system(eq, p);
            let y = Poly2::from_terms(&[(0, 1, 1.0)]);
            let lie = &(&h.poly.d_phi() * &(&y * &s.denominator)) + &(&h.poly.d_y() * &s.numerator);
            assert!(lie.max_abs_coeff() <= 1e-14, "{eq}: {lie:?}");
        }
    }

    #[test]
    fn gch3_special_values() {
        let (c, g) = (1.0, 0.0);
        let h = first_integral(EquationId::Gch3, WaveParams::new(c, g).unwrap());
        assert_eq!(h.value_at(0.0, 0.0), 0.0);
        assert_eq!(h.value_at(0.3, 0.4), h.value_at(0.3, -0.4));
        let h = first_integral(EquationId::Gch3, WaveParams::new(2.0, 0.3).unwrap());
        let r = 2f64.sqrt();
        assert!((h.value_at(r, 0.0) - (0.3 * r - 1.0)).abs() < 1e-14);
        // On the hyperbola H = g phi - c^2/4.
        let phi: f64 = 1.9;
        let y = (phi * phi - 2.0).sqrt();
        assert!((h.value_at(phi, y) - (0.3 * phi - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn gch1_constant_on_singular_line() {
        let p = WaveParams::new(0.5, 0.014).unwrap();
        let h = first_integral(EquationId::Gch1, p);
        let a = h.value_at(-0.25, 0.1);
        let b = h.value_at(-0.25, 2.0);
        assert!((a - b).abs() < 1e-15);
        let y = (0.0695f64).sqrt();
        assert_eq!(h.value_at(-0.25, y), h.value_at(-0.25, -y));
    }
}
