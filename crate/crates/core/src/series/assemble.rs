use serde::{Deserialize, Serialize};

use crate::equation::{EquationId, WaveParams};
use crate::error::{Error, Result};
use crate::series::branch::{build_branch_with, SeriesBranch, Side};
use crate::series::continuity::solve_continuity_with;
use crate::series::convergence::{convergence_report, ConvergenceReport, Verdict};
use crate::series::exact::{exact_g0, ExactG0Solution};
use crate::series::recurrence::ForcingSign;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    /// Solve the continuity polynomial for `phi(0) = target`.  With `prefer`
    /// the root nearest to it is taken; otherwise a converging root, then the
    /// smallest in magnitude.
    ContinuityRoot { target: f64, prefer: Option<f64> },
    /// Left branch `phi(-z)` of the right branch with `a_1` given; reversible
    /// equations only.
    Mirror { a1: f64 },
    /// Right branch from `a_1`, left leading coefficient solved so both sides
    /// meet at `phi+(0)`.
    MatchedLeft { a1: f64, prefer: Option<f64> },
    /// Closed-form GCH-III solution at `g = 0`.
    ExactG0 { family: u8, constants: [f64; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    ContinuityRoot,
    Mirror,
    MatchedLeft,
    ExactG0,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Series {
        right: SeriesBranch,
        left: SeriesBranch,
        right_report: ConvergenceReport,
        left_report: ConvergenceReport,
    },
    Exact { solution: ExactG0Solution },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicSolution {
    pub equation: EquationId,
    pub params: WaveParams,
    pub construction: Construction,
    pub profile: Profile,
    pub junction_value: f64,
    pub junction_jump: f64,
}

impl HomoclinicSolution {
    pub fn branches(&self) -> Option<(&SeriesBranch, &SeriesBranch)> {
        match &self.profile {
            Profile::Series { right, left, .. } => Some((right, left)),
            Profile::Exact { .. } => None,
        }
    }

    pub fn x0(&self) -> Option<f64> {
        self.branches().map(|(r, _)| r.x0)
    }

    /// `(phi, phi', phi'')` at `z`, using the branch for the sign of `z`.  At
    /// `z = 0` the value is the junction value and the derivatives are the
    /// right-sided ones.
    pub fn derivatives(&self, z: f64) -> (f64, f64, f64) {
        match &self.profile {
            Profile::Series { right, left, .. } => {
                if z > 0.0 {
                    right.derivatives(z)
                } else if z < 0.0 {
                    left.derivatives(z)
                } else {
                    let (_, d1, d2) = right.derivatives(0.0);
                    (self.junction_value, d1, d2)
                }
            }
            Profile::Exact { solution } => solution.derivatives(z),
        }
    }

    pub fn phi(&self, z: f64) -> f64 {
        self.derivatives(z).0
    }
}

/// `u(x, t) = phi(x - c t)`.
pub fn evaluate_wave(sol: &HomoclinicSolution, x: f64, t: f64) -> f64 {
    sol.phi(x - sol.params.c() * t)
}

fn series_solution(
    eq: EquationId,
    p: WaveParams,
    construction: Construction,
    right: SeriesBranch,
    left: SeriesBranch,
) -> HomoclinicSolution {
    let (vr, vl) = (right.junction_value(), left.junction_value());
    let right_report = convergence_report(&right);
    let left_report = convergence_report(&left);
    HomoclinicSolution {
        equation: eq,
        params: p,
        construction,
        profile: Profile::Series { right, left, right_report, left_report },
        junction_value: vr,
        junction_jump: (vr - vl).abs(),
    }
}

fn pick_root(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    m: usize,
    side: Side,
    sign: ForcingSign,
    roots: &[f64],
    prefer: Option<f64>,
) -> Result<Option<SeriesBranch>> {
    if roots.is_empty() {
        return Ok(None);
    }
    if let Some(h) = prefer {
        let r = roots.iter().copied().min_by(|a, b| (a - h).abs().total_cmp(&(b - h).abs())).unwrap();
        return build_branch_with(eq, p, x0, r, m, side, sign).map(Some);
    }
    let mut built = Vec::with_capacity(roots.len());
    for &r in roots {
        built.push(build_branch_with(eq, p, x0, r, m, side, sign)?);
    }
    built.sort_by(|a, b| {
        let ca = convergence_report(a).verdict == Verdict::Converging;
        let cb = convergence_report(b).verdict == Verdict::Converging;
        cb.cmp(&ca).then(a.leading().abs().total_cmp(&b.leading().abs()))
    });
    Ok(built.into_iter().next())
}

/// Assembles a two-sided solution at the saddle `x0` with truncation `m`
/// under the standard recurrence sign.
pub fn assemble(eq: EquationId, p: WaveParams, x0: f64, m: usize, strategy: &Strategy) -> Result<HomoclinicSolution> {
    assemble_with(eq, p, x0, m, strategy, ForcingSign::Standard)
}

pub fn assemble_with(
    eq: EquationId,
    p: WaveParams,
    x0: f64,
    m: usize,
    strategy: &Strategy,
    sign: ForcingSign,
) -> Result<HomoclinicSolution> {
    match *strategy {
        Strategy::ContinuityRoot { target, prefer } => {
            let roots = solve_continuity_with(eq, p, x0, m, target, Side::Right, sign)?;
            let right = pick_root(eq, p, x0, m, Side::Right, sign, &roots, prefer)?
                .ok_or(Error::NoContinuousAssembly { side: "right", target })?;
            if eq.is_reversible() {
                let left = right.mirrored();
                return Ok(series_solution(eq, p, Construction::ContinuityRoot, right, left));
            }
            let roots = solve_continuity_with(eq, p, x0, m, target, Side::Left, sign)?;
            let left = pick_root(eq, p, x0, m, Side::Left, sign, &roots, prefer)?
                .ok_or(Error::NoContinuousAssembly { side: "left", target })?;
            Ok(series_solution(eq, p, Construction::ContinuityRoot, right, left))
        }
        Strategy::Mirror { a1 } => {
            if !eq.is_reversible() {
                return Err(Error::UnsupportedEquation("mirror assembly of a non-reversible equation"));
            }
            let right = build_branch_with(eq, p, x0, a1, m, Side::Right, sign)?;
            let left = right.mirrored();
            Ok(series_solution(eq, p, Construction::Mirror, right, left))
        }
        Strategy::MatchedLeft { a1, prefer } => {
            let right = build_branch_with(eq, p, x0, a1, m, Side::Right, sign)?;
            let target = right.junction_value();
            let roots = solve_continuity_with(eq, p, x0, m, target, Side::Left, sign)?;
            let left = pick_root(eq, p, x0, m, Side::Left, sign, &roots, prefer)?
                .ok_or(Error::NoContinuousAssembly { side: "left", target })?;
            Ok(series_solution(eq, p, Construction::MatchedLeft, right, left))
        }
        Strategy::ExactG0 { family, constants } => {
            let solution = exact_g0(eq, p, family, constants)?;
            let v = solution.value(0.0);
            Ok(HomoclinicSolution {
                equation: eq,
                params: p,
                construction: Construction::ExactG0,
                profile: Profile::Exact { solution },
                junction_value: v,
                junction_jump: 0.0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: f64, g: f64) -> WaveParams {
        WaveParams::new(c, g).unwrap()
    }

    #[test]
    fn mirror_has_zero_jump() {
        let sol = assemble(EquationId::Gch1, p(0.5, 0.014), -0.042344, 10, &Strategy::Mirror { a1: 0.02 }).unwrap();
        assert_eq!(sol.junction_jump, 0.0);
        assert_eq!(sol.phi(1.3), sol.phi(-1.3));
    }

    #[test]
    fn mirror_rejected_for_gch2() {
        let r = assemble(EquationId::Gch2, p(-1.0, -1.25), 0.4627, 10, &Strategy::Mirror { a1: 0.04 });
        assert!(matches!(r, Err(Error::UnsupportedEquation(_))));
    }

    #[test]
    fn gch2_zero_g_continuity_fails_on_the_right() {
        let r = assemble(EquationId::Gch2, p(1.0, 0.0), 0.0, 25, &Strategy::ContinuityRoot { target: 0.0, prefer: None });
        assert!(matches!(r, Err(Error::NoContinuousAssembly { side: "right", .. })));
    }

    #[test]
    fn exact_wrapper() {
        let s = Strategy::ExactG0 { family: 1, constants: [0.0, 1.0] };
        let sol = assemble(EquationId::Gch3, p(1.0, 0.0), 0.0, 10, &s).unwrap();
        let (x, t) = (0.8, 0.3);
        assert!((evaluate_wave(&sol, x, t) - (-(x - t)).exp()).abs() < 1e-15);
        assert_eq!(sol.junction_value, 1.0);
    }

    #[test]
    fn solution_json_round_trip() {
        let params = p(-1.0, -1.25);
        let x0 = crate::equation::equilibria(EquationId::Gch2, params)[1].value;
        let s = Strategy::MatchedLeft { a1: 0.04, prefer: Some(0.0348) };
        let sol = assemble(EquationId::Gch2, params, x0, 25, &s).unwrap();
        let s = serde_json::to_string(&sol).unwrap();
        let back: HomoclinicSolution = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sol);
    }
}
