//! Small polynomial toolkit: dense bivariate polynomials in `(phi, y)` and
//! real root finding for univariate polynomials.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dense bivariate polynomial; `coef[i][j]` multiplies `phi^i * y^j`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    coef: Vec<Vec<f64>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self { coef: Vec::new() }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_terms(&[(0, 0, value)])
    }

    /// Builds a polynomial from `(phi power, y power, coefficient)` triples.
    /// Repeated powers are summed.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let mut p = Self::zero();
        for &(i, j, v) in terms {
            p.add_term(i, j, v);
        }
        p
    }

    fn add_term(&mut self, i: usize, j: usize, v: f64) {
        if self.coef.len() <= i {
            self.coef.resize(i + 1, Vec::new());
        }
        let row = &mut self.coef[i];
        if row.len() <= j {
            row.resize(j + 1, 0.0);
        }
        row[j] += v;
    }

    /// Coefficient of `phi^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coef.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }

    /// Nonzero terms as `(i, j, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coef.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(move |(j, v)| (i, j, *v))
        })
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, phi: f64, y: f64) -> f64 {
        // Horner in phi over Horner-in-y rows.
        let mut acc = 0.0;
        for row in self.coef.iter().rev() {
            let mut r = 0.0;
            for v in row.iter().rev() {
                r = r * y + v;
            }
            acc = acc * phi + r;
        }
        acc
    }

    pub fn d_phi(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, v) in self.terms() {
            if i > 0 {
                out.add_term(i - 1, j, v * i as f64);
            }
        }
        out
    }

    pub fn d_y(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, v) in self.terms() {
            if j > 0 {
                out.add_term(i, j - 1, v * j as f64);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (i, j, v) in self.terms() {
            out.add_term(i, j, v * s);
        }
        out
    }

    /// Largest absolute coefficient, used to scale tolerances.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (i, j, v) in rhs.terms() {
            out.add_term(i, j, v);
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

/// A real root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u8,
}

/// Roots closer than this (relative to `max(1, |root|)`) merge into one
/// root of higher multiplicity.
pub const MERGE_TOL: f64 = 1e-9;

fn merge_close(mut roots: Vec<f64>) -> Vec<RealRoot> {
    roots.sort_by(f64::total_cmp);
    let mut out: Vec<RealRoot> = Vec::new();
    for r in roots {
        match out.last_mut() {
            Some(last) if (r - last.value).abs() <= MERGE_TOL * last.value.abs().max(1.0) => {
                let m = last.multiplicity as f64;
                last.value = (last.value * m + r) / (m + 1.0);
                last.multiplicity += 1;
            }
            _ => out.push(RealRoot { value: r, multiplicity: 1 }),
        }
    }
    out
}

/// Real roots of `a x^2 + b x + c` (a != 0) via the cancellation-free form.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<RealRoot> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { merge_close(vec![-c / b]) };
    }
    let disc = b * b - 4.0 * a * c;
    // Half-separation of the (possibly complex) pair.
    let half_gap = disc.abs().sqrt() / (2.0 * a.abs());
    let center = -b / (2.0 * a);
    if 2.0 * half_gap <= MERGE_TOL * center.abs().max(1.0) {
        return vec![RealRoot { value: center, multiplicity: 2 }];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    merge_close(vec![r1, r2])
}

fn cubic_eval(coef: [f64; 4], x: f64) -> (f64, f64) {
    let [a, b, c, d] = coef;
    let p = ((a * x + b) * x + c) * x + d;
    let dp = (3.0 * a * x + 2.0 * b) * x + c;
    (p, dp)
}

/// Real roots of `a x^3 + b x^2 + c x + d` (a != 0): trigonometric form for
/// three real roots, Cardano otherwise, then one Newton polish step each.
pub fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<RealRoot> {
    if a == 0.0 {
        return quadratic_roots(b, c, d);
    }
    let (bn, cn, dn) = (b / a, c / a, d / a);
    let shift = -bn / 3.0;
    let p = cn - bn * bn / 3.0;
    let q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    let mut raw: Vec<f64> = Vec::with_capacity(3);
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if p < 0.0 && disc <= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            raw.push(m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift);
        }
    } else {
        let s = disc.max(0.0).sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        raw.push(u + v + shift);
        // The complex pair -(u+v)/2 +- i sqrt(3)/2 (u-v) is kept when it is
        // numerically a double real root.
        let re = -(u + v) / 2.0 + shift;
        let im = (3f64.sqrt() / 2.0 * (u - v)).abs();
        if 2.0 * im <= MERGE_TOL * re.abs().max(1.0) {
            raw.push(re);
            raw.push(re);
        }
    }
    let coef = [a, b, c, d];
    let polished = raw
        .into_iter()
        .map(|x| {
            let (f, df) = cubic_eval(coef, x);
            if df != 0.0 && df.is_finite() {
                let step = f / df;
                let x1 = x - step;
                if cubic_eval(coef, x1).0.abs() <= f.abs() {
                    return x1;
                }
            }
            x
        })
        .collect();
    merge_close(polished)
}

/// Evaluates `sum coef[k] x^k` (ascending order) at a complex point, with
/// derivative.
fn horner_complex(coef: &[f64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coef.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Evaluates `sum coef[k] x^k` at a real point, with derivative.
pub fn horner(coef: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coef.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Parlett-Reinsch balancing by powers of two.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Tolerance on the imaginary part, relative to `1 + |re|`, for an
/// eigenvalue to count as a real root.
pub const REAL_ROOT_IMAG_TOL: f64 = 1e-9;

/// Real roots of `sum coef[k] x^k` (ascending coefficients) from the
/// eigenvalues of the balanced companion matrix, Newton-polished.
///
/// Exact zero roots (vanishing low-order coefficients) are reported as 0.
pub fn real_roots(coef: &[f64]) -> Vec<f64> {
    let mut hi = coef.len();
    while hi > 0 && coef[hi - 1] == 0.0 {
        hi -= 1;
    }
    let coef = &coef[..hi];
    let mut lo = 0;
    while lo < coef.len() && coef[lo] == 0.0 {
        lo += 1;
    }
    let mut out = vec![0.0; if lo > 0 { 1 } else { 0 }];
    let core = &coef[lo..];
    if core.len() <= 1 {
        return out;
    }

    // Rescale x = s t so that the end coefficients have equal magnitude.
    let n = core.len() - 1;
    let s = (core[0].abs() / core[n].abs()).powf(1.0 / n as f64);
    let mut scaled: Vec<f64> = core.iter().enumerate().map(|(k, c)| c * s.powi(k as i32)).collect();
    let lead = scaled[n];
    for v in scaled.iter_mut() {
        *v /= lead;
    }

    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -scaled[i];
    }
    balance(&mut comp);
    let eig = comp.complex_eigenvalues();

    for t in eig.iter() {
        let mut x = *t;
        for _ in 0..3 {
            let (p, dp) = horner_complex(&scaled, x);
            if dp.norm() == 0.0 {
                break;
            }
            let nx = x - p / dp;
            if !(nx.re.is_finite() && nx.im.is_finite()) {
                break;
            }
            x = nx;
        }
        if x.im.abs() > REAL_ROOT_IMAG_TOL * (1.0 + x.re.abs()) {
            continue;
        }
        // Polish in the original variable.
        let mut r = x.re * s;
        for _ in 0..3 {
            let (p, dp) = horner(core, r);
            if dp == 0.0 {
                break;
            }
            let nr = r - p / dp;
            if !nr.is_finite() || horner(core, nr).0.abs() > p.abs() {
                break;
            }
            r = nr;
        }
        out.push(r);
    }
    out.sort_by(f64::total_cmp);
    // Collapse duplicates produced by polishing two nearby eigenvalues onto
    // the same root.
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * a.abs().max(1.0));
    out
}
