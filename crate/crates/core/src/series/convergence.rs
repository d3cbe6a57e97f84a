use serde::{Deserialize, Serialize};

use crate::series::branch::SeriesBranch;

/// Margin around 1 separating converging and diverging tail ratios.
pub const RATIO_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub verdict: Verdict,
    /// Infinite for overflowed branches; serialized as `null` then.
    #[serde(with = "nonfinite_as_null")]
    pub tail_ratio: f64,
    /// 1-based index of the largest `|a_k|`.
    pub max_coefficient_index: usize,
}

mod nonfinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() { s.serialize_f64(*v) } else { s.serialize_none() }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Per-index geometric ratio of the coefficient envelope over the last two
/// quartiles: `(max_{last q} |a_k| / max_{previous q} |a_k|)^{1/q}`.
///
/// Using envelopes rather than consecutive ratios tolerates coefficients that
/// vanish exactly or alternate in size with the parity of `k`.
pub fn tail_ratio(coefficients: &[f64]) -> f64 {
    let m = coefficients.len();
    let q = (m / 4).max(1);
    if m < 2 * q {
        return f64::NAN;
    }
    let env = |s: &[f64]| s.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let last = env(&coefficients[m - q..]);
    let prev = env(&coefficients[m - 2 * q..m - q]);
    match (prev == 0.0, last == 0.0) {
        (_, true) => 0.0,
        (true, false) => f64::INFINITY,
        _ => (last / prev).powf(1.0 / q as f64),
    }
}

pub fn convergence_report(branch: &SeriesBranch) -> ConvergenceReport {
    let a = &branch.coefficients;
    let max_coefficient_index = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .map(|(i, _)| i + 1)
        .unwrap_or(0);
    if branch.overflowed {
        return ConvergenceReport { verdict: Verdict::Diverging, tail_ratio: f64::INFINITY, max_coefficient_index };
    }
    let r = tail_ratio(a);
    let last_below_first = a.last().map(|l| l.abs() < a[0].abs()).unwrap_or(false);
    let verdict = if r < 1.0 - RATIO_MARGIN && last_below_first {
        Verdict::Converging
    } else if r > 1.0 + RATIO_MARGIN {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    };
    ConvergenceReport { verdict, tail_ratio: r, max_coefficient_index }
}
