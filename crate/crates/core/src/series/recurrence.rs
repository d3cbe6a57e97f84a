//! Order-by-order recurrences `F(k alpha) a_k = forcing_k(a_1..a_{k-1})`.
//!
//! Brackets are stated for ordered index pairs `(i, k-i)` and, for GCH-III,
//! ordered triples `(l, m, n)`.  `residual_*_coefficient` give the symmetric
//! coefficients of the monomials `a_i a_j` and `a_l a_m a_n` in the order-`k`
//! residual, which is what the numerical oracle recovers.

use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};

/// Sign convention for the nonlinear terms of the recurrence.
///
/// `Standard` is obtained by direct substitution of the series into the
/// traveling ODE.  `Reversed` negates the whole forcing; it is kept so
/// published values computed under that convention can be reproduced and
/// compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingSign {
    #[default]
    Standard,
    Reversed,
}

impl ForcingSign {
    fn factor(self) -> f64 {
        match self {
            ForcingSign::Standard => 1.0,
            ForcingSign::Reversed => -1.0,
        }
    }
}

/// Linear factor `F(k alpha)` multiplying `a_k`.
pub fn linear_factor(eq: EquationId, p: WaveParams, x0: f64, k_alpha: f64) -> f64 {
    let c = p.c();
    let s = k_alpha * k_alpha;
    match eq {
        EquationId::Gch1 => s * (c + 2.0 * x0) - (8.0 * x0 + c),
        EquationId::Gch2 => s * (c + 4.0 * x0) - (c + 16.0 * x0),
        EquationId::Gch3 => s * (c - x0 * x0) + 3.0 * x0 * x0 - c,
    }
}

/// Bracket multiplying `a_i a_j` (ordered, `i + j = k`) in the forcing.
pub fn pair_bracket(eq: EquationId, x0: f64, alpha: f64, i: usize, j: usize) -> f64 {
    let (fi, fj) = (i as f64, j as f64);
    let a2 = alpha * alpha;
    match eq {
        EquationId::Gch1 => 4.0 - 2.0 * fi * fi * a2 - 2.0 * fi * fj * a2,
        EquationId::Gch2 => 8.0 - 4.0 * fi * fi * a2 - 2.0 * fi * fj * a2 + 2.0 * fi * fj * fj * a2 * alpha,
        EquationId::Gch3 => x0 * (2.0 * fi * fi * a2 + fi * fj * a2 - 3.0),
    }
}

/// Bracket multiplying `a_l a_m a_n` (ordered) in the GCH-III forcing; zero
/// for the quadratic equations.
pub fn triple_bracket(eq: EquationId, alpha: f64, l: usize, m: usize, n: usize) -> f64 {
    match eq {
        EquationId::Gch3 => {
            let (fl, fm, fn_) = (l as f64, m as f64, n as f64);
            let a2 = alpha * alpha;
            fn_ * fn_ * a2 + fm * fn_ * a2 - fl * fm * fn_ * fn_ * a2 * a2 - 1.0
        }
        _ => 0.0,
    }
}

/// The order-`k` forcing given `a[0..k-1] = a_1..a_{k-1}` (entries beyond
/// `k-1` are ignored).
pub fn forcing(eq: EquationId, x0: f64, alpha: f64, k: usize, a: &[f64], sign: ForcingSign) -> f64 {
    let at = |i: usize| a[i - 1];
    let mut s = 0.0;
    for i in 1..k {
        s += pair_bracket(eq, x0, alpha, i, k - i) * at(i) * at(k - i);
    }
    if eq == EquationId::Gch3 {
        for l in 1..k {
            for m in 1..k - l {
                let n = k - l - m;
                s += triple_bracket(eq, alpha, l, m, n) * at(l) * at(m) * at(n);
            }
        }
    }
    sign.factor() * s
}

/// Coefficient of `a_i a_j` (`i <= j`) in the order-`(i+j)` residual
/// `LHS - RHS`.
pub fn residual_pair_coefficient(eq: EquationId, x0: f64, alpha: f64, i: usize, j: usize) -> f64 {
    let b = if i == j {
        pair_bracket(eq, x0, alpha, i, i)
    } else {
        pair_bracket(eq, x0, alpha, i, j) + pair_bracket(eq, x0, alpha, j, i)
    };
    -b
}

/// Coefficient of `a_l a_m a_n` (`l <= m <= n`) in the order-`(l+m+n)`
/// residual.
pub fn residual_triple_coefficient(eq: EquationId, alpha: f64, l: usize, m: usize, n: usize) -> f64 {
    let mut perms = vec![[l, m, n], [l, n, m], [m, l, n], [m, n, l], [n, l, m], [n, m, l]];
    perms.sort_unstable();
    perms.dedup();
    -perms.iter().map(|t| triple_bracket(eq, alpha, t[0], t[1], t[2])).sum::<f64>()
}
