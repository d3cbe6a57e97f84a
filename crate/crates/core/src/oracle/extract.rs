//! Recovers the order-by-order structure of the traveling residual without
//! using the recurrence formulas.
//!
//! Substituting `phi = x0 + sum_k a_k E^k` (`E = e^{exponent z}`) makes the
//! residual a polynomial of degree at most `3 k_max` in `E`.  Sampling it at
//! `3 k_max + 1` points and solving the Vandermonde system recovers each
//! order's coefficient.  Because each order is itself a polynomial in the
//! `a_k`, finite differences in coefficient space isolate the linear factor
//! and every quadratic and cubic bracket exactly (up to rounding).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equation::{residual_generic, EquationId, WaveParams};
use crate::error::{Error, Result};
use crate::series::{linear_factor, residual_pair_coefficient, residual_triple_coefficient};

pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Sampling {
    /// `E` at the roots of unity; the sampling matrix is unitary up to scale.
    UnitCircle,
    /// Real `z` equispaced on `[z_min, z_max]`.
    RealLine { z_min: f64, z_max: f64 },
}

/// Coefficient of `a_i a_j` (`i <= j`) in the order-`k` residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub residual: f64,
}

/// Coefficient of `a_l a_m a_n` (`l <= m <= n`) in the order-`k` residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleTerm {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub residual: f64,
}

impl PairTerm {
    /// The term as it appears on the forcing side of `F a_k = forcing`.
    pub fn forcing(&self) -> f64 {
        -self.residual
    }
}

impl TripleTerm {
    pub fn forcing(&self) -> f64 {
        -self.residual
    }
}

/// Residual coefficients in the arrangement `F(k exponent) a_k + sum(terms) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractedRecurrence {
    pub exponent: f64,
    pub k_max: usize,
    /// `linear[k-1]` multiplies `a_k` in the order-`k` residual.
    pub linear: Vec<f64>,
    pub pairs: Vec<PairTerm>,
    pub triples: Vec<TripleTerm>,
    pub condition_number: f64,
}

struct Sampler {
    eq: EquationId,
    c: f64,
    g: f64,
    x0: f64,
    exponent: f64,
    k_max: usize,
    points: Vec<Complex64>,
    svd: nalgebra::SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Sampler {
    fn orders(&self, a: &[f64]) -> Vec<f64> {
        let n = self.points.len();
        let rhs: Vec<Complex64> = self
            .points
            .iter()
            .map(|&w| {
                let mut phi = Complex64::new(self.x0, 0.0);
                let mut d1 = Complex64::new(0.0, 0.0);
                let mut d2 = Complex64::new(0.0, 0.0);
                let mut wk = Complex64::new(1.0, 0.0);
                for (idx, ak) in a.iter().enumerate() {
                    wk *= w;
                    let kb = (idx + 1) as f64 * self.exponent;
                    phi += wk * *ak;
                    d1 += wk * (*ak * kb);
                    d2 += wk * (*ak * kb * kb);
                }
                residual_generic(self.eq, self.c, self.g, phi, d1, d2)
            })
            .collect();
        let sol = self.svd.solve(&DVector::from_vec(rhs), 0.0).expect("SVD carries U and V");
        (0..n).map(|i| sol[i].re).collect()
    }

    fn unit(&self, idx: &[(usize, f64)]) -> Vec<f64> {
        let mut a = vec![0.0; self.k_max];
        for &(i, v) in idx {
            a[i - 1] += v;
        }
        a
    }
}

pub fn extract_recurrence(eq: EquationId, p: WaveParams, x0: f64, exponent: f64, k_max: usize) -> Result<ExtractedRecurrence> {
    extract_recurrence_with(eq, p, x0, exponent, k_max, Sampling::UnitCircle)
}

pub fn extract_recurrence_with(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    exponent: f64,
    k_max: usize,
    sampling: Sampling,
) -> Result<ExtractedRecurrence> {
    if k_max < 1 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    if !exponent.is_finite() || exponent == 0.0 {
        return Err(Error::InvalidInput(format!("bad exponent {exponent}")));
    }
    let n = 3 * k_max + 1;
    let points: Vec<Complex64> = match sampling {
        Sampling::UnitCircle => (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect(),
        Sampling::RealLine { z_min, z_max } => (0..n)
            .map(|j| {
                let z = z_min + (z_max - z_min) * j as f64 / (n - 1) as f64;
                Complex64::new((exponent * z).exp(), 0.0)
            })
            .collect(),
    };
    let v = DMatrix::from_fn(n, n, |r, col| points[r].powu(col as u32));
    let svd = v.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned(cond));
    }
    let s = Sampler { eq, c: p.c(), g: p.g(), x0, exponent, k_max, points, svd };
    let base = s.orders(&vec![0.0; k_max]);
    let r = |a: Vec<f64>, k: usize| s.orders(&a)[k] - base[k];

    let linear: Vec<f64> = (1..=k_max).map(|k| r(s.unit(&[(k, 1.0)]), k)).collect();

    let mut pairs = Vec::new();
    for k in 2..=k_max {
        for i in 1..=k / 2 {
            let j = k - i;
            let residual = if i == j {
                r(s.unit(&[(i, 1.0)]), k)
            } else {
                r(s.unit(&[(i, 1.0), (j, 1.0)]), k) - r(s.unit(&[(i, 1.0)]), k) - r(s.unit(&[(j, 1.0)]), k)
            };
            pairs.push(PairTerm { k, i, j, residual });
        }
    }

    let mut triples = Vec::new();
    for k in 3..=k_max {
        for l in 1..=k / 3 {
            for m in l..=(k - l) / 2 {
                let n3 = k - l - m;
                if n3 < m {
                    continue;
                }
                let mut distinct = vec![l, m, n3];
                distinct.dedup();
                // Inclusion-exclusion over subsets of the distinct indices.
                let mut residual = 0.0;
                let d = distinct.len();
                for mask in 1u32..(1 << d) {
                    let sub: Vec<(usize, f64)> =
                        (0..d).filter(|b| mask & (1 << b) != 0).map(|b| (distinct[b], 1.0)).collect();
                    let sgn = if (d - sub.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
                    residual += sgn * r(s.unit(&sub), k);
                }
                triples.push(TripleTerm { k, l, m, n: n3, residual });
            }
        }
    }
    Ok(ExtractedRecurrence { exponent, k_max, linear, pairs, triples, condition_number: cond })
}

/// Largest mismatch between extracted and implemented coefficients, each
/// relative to the largest implemented magnitude at the same order.
pub fn recurrence_mismatch(ext: &ExtractedRecurrence, eq: EquationId, p: WaveParams, x0: f64) -> f64 {
    let a = ext.exponent;
    let mut worst = 0.0f64;
    let mut scale_of = vec![0.0f64; ext.k_max + 1];
    let mut entries: Vec<(usize, f64, f64)> = Vec::new();
    for k in 1..=ext.k_max {
        entries.push((k, ext.linear[k - 1], linear_factor(eq, p, x0, k as f64 * a)));
    }
    for t in &ext.pairs {
        entries.push((t.k, t.residual, residual_pair_coefficient(eq, x0, a, t.i, t.j)));
    }
    for t in &ext.triples {
        entries.push((t.k, t.residual, residual_triple_coefficient(eq, a, t.l, t.m, t.n)));
    }
    for &(k, _, imp) in &entries {
        scale_of[k] = scale_of[k].max(imp.abs());
    }
    // Order 1 holds only F(exponent), which vanishes analytically and is
    // rounding noise in floating point; it and any order whose implemented
    // terms all vanish are measured against the overall magnitude.
    let global = scale_of.iter().skip(2).fold(0.0f64, |a, b| a.max(*b)).max(f64::MIN_POSITIVE);
    for &(k, got, imp) in &entries {
        let s = if k > 1 && scale_of[k] > 0.0 { scale_of[k] } else { global };
        let rel = (got - imp).abs() / s;
        worst = worst.max(rel);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::saddle_eigenvalues;

    #[test]
    fn second_order_anchors() {
        let p = WaveParams::new(-1.0, 0.06).unwrap();
        let (_, a) = saddle_eigenvalues(EquationId::Gch1, p, 0.1).unwrap();
        let ext = extract_recurrence(EquationId::Gch1, p, 0.1, a, 4).unwrap();
        let t = ext.pairs.iter().find(|t| t.k == 2).unwrap();
        assert!((t.forcing() - 4.0 * (1.0 - a * a)).abs() < 1e-9);

        let p = WaveParams::new(-1.0, -1.25).unwrap();
        let x0 = crate::equation::equilibria(EquationId::Gch2, p)[1].value;
        let (_, a) = saddle_eigenvalues(EquationId::Gch2, p, x0).unwrap();
        let ext = extract_recurrence(EquationId::Gch2, p, x0, a, 4).unwrap();
        let t = ext.pairs.iter().find(|t| t.k == 2).unwrap();
        assert!((t.forcing() - (8.0 - 6.0 * a * a + 2.0 * a * a * a)).abs() < 1e-9);
    }

    #[test]
    fn gch3_cubic_term() {
        let p = WaveParams::new(2.0, 0.8).unwrap();
        let x0 = crate::equation::equilibria(EquationId::Gch3, p)[1].value;
        let (_, a) = saddle_eigenvalues(EquationId::Gch3, p, x0).unwrap();
        let ext = extract_recurrence(EquationId::Gch3, p, x0, a, 5).unwrap();
        let t = ext.triples.iter().find(|t| (t.l, t.m, t.n) == (1, 1, 1)).unwrap();
        let want = (a * a - 1.0).powi(2);
        assert!((t.residual - want).abs() < 1e-9, "{} vs {want}", t.residual);
        assert!(recurrence_mismatch(&ext, EquationId::Gch3, p, x0) < 1e-9);
    }

    #[test]
    fn real_line_sampling_is_ill_conditioned() {
        let p = WaveParams::new(0.5, 0.014).unwrap();
        let r = extract_recurrence_with(
            EquationId::Gch1,
            p,
            -0.0423,
            -0.68,
            10,
            Sampling::RealLine { z_min: 0.0, z_max: 5.0 },
        );
        assert!(matches!(r, Err(Error::IllConditioned(_))));
    }
}
