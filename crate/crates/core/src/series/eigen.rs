use crate::equation::{EquationId, WaveParams};
use crate::error::{Error, Result};

/// `(numerator, denominator)` of the squared saddle exponent at `x0`.
pub fn eigen_radicand(eq: EquationId, p: WaveParams, x0: f64) -> (f64, f64) {
    let c = p.c();
    match eq {
        EquationId::Gch1 => (8.0 * x0 + c, c + 2.0 * x0),
        EquationId::Gch2 => (c + 16.0 * x0, c + 4.0 * x0),
        EquationId::Gch3 => (3.0 * x0 * x0 - c, x0 * x0 - c),
    }
}

/// The exponents `(+alpha, -alpha)` of the linearization of the traveling ODE
/// at the saddle `x0`.
pub fn saddle_eigenvalues(eq: EquationId, p: WaveParams, x0: f64) -> Result<(f64, f64)> {
    if !x0.is_finite() {
        return Err(Error::NonFinite("x0"));
    }
    let (num, den) = eigen_radicand(eq, p, x0);
    if den.abs() <= 1e-12 * (p.c().abs() + x0 * x0 + x0.abs()) {
        return Err(Error::SingularDegeneracy { x0 });
    }
    let radicand = num / den;
    if radicand <= 0.0 {
        return Err(Error::NotASaddle { x0, radicand });
    }
    let a = radicand.sqrt();
    Ok((a, -a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(eq: EquationId, c: f64, g: f64, x0: f64) -> Result<(f64, f64)> {
        saddle_eigenvalues(eq, WaveParams::new(c, g).unwrap(), x0)
    }

    #[test]
    fn anchors() {
        let (a, b) = ev(EquationId::Gch1, -1.0, 0.06, 0.1).unwrap();
        assert!((a - 0.5).abs() < 1e-12 && (b + 0.5).abs() < 1e-12);
        let (a, _) = ev(EquationId::Gch2, -1.0, -1.25, 0.4627).unwrap();
        assert!((a - 2.7434).abs() < 5e-4);
        let (a, _) = ev(EquationId::Gch2, 3.0, 0.1, -0.0370).unwrap();
        assert!((a - 0.9189).abs() < 5e-4);
    }

    #[test]
    fn errors() {
        // The center of (gch1, 0.5, 0.014) has a negative radicand.
        assert!(matches!(ev(EquationId::Gch1, 0.5, 0.014, -0.0827), Err(Error::NotASaddle { .. })));
        assert!(matches!(ev(EquationId::Gch1, 1.0, 0.0, -0.5), Err(Error::SingularDegeneracy { .. })));
        assert!(matches!(ev(EquationId::Gch3, 1.0, 0.0, 1.0), Err(Error::SingularDegeneracy { .. })));
    }
}
