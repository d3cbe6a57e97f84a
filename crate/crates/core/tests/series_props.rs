mod common;

use common::{g_in_saddle_range, saddle_config, speed};
use gchtw_core::oracle::residual_scan;
use gchtw_core::series::{assemble, build_branch, evaluate_wave, solve_continuity, Side, Strategy as Build};
use gchtw_core::{traveling_residual, EquationId, WaveParams};
use proptest::prelude::*;

fn reversible() -> impl Strategy<Value = EquationId> {
    prop::sample::select(vec![EquationId::Gch1, EquationId::Gch3])
}

prop_compose! {
    fn saddle_case(eqs: Vec<EquationId>)(
        eq in prop::sample::select(eqs), cm in 0.2..3.0f64, neg in any::<bool>(), s in 0.02..0.98f64,
    ) -> (EquationId, f64, f64) {
        let c = speed(eq, cm, neg);
        (eq, c, g_in_saddle_range(eq, c, s))
    }
}

proptest! {
    #[test]
    fn coefficients_are_homogeneous(
        (eq, c, g) in saddle_case(EquationId::ALL.to_vec()),
        a1 in prop_oneof![-0.5..-0.01f64, 0.01..0.5f64],
        lambda in 0.25..4.0f64,
        left in any::<bool>(),
    ) {
        let cfg = saddle_config(eq, c, g);
        prop_assume!(cfg.is_some());
        let (p, x0, _) = cfg.unwrap();
        let side = if left { Side::Left } else { Side::Right };
        let m = 12;
        let base = build_branch(eq, p, x0, a1, m, side).unwrap();
        let scaled = build_branch(eq, p, x0, lambda * a1, m, side).unwrap();
        prop_assume!(!base.overflowed && !scaled.overflowed);
        for (k, (a, b)) in base.coefficients.iter().zip(&scaled.coefficients).enumerate() {
            let want = lambda.powi(k as i32 + 1) * a;
            prop_assert!(
                (b - want).abs() <= 1e-12 * want.abs() + 1e-300,
                "{eq} c={c} g={g} k={}: {b:e} vs {want:e}", k + 1
            );
        }
    }

    #[test]
    fn mirror_residual_is_symmetric(
        (eq, c, g) in saddle_case(vec![EquationId::Gch1, EquationId::Gch3]),
        a1 in prop_oneof![-0.3..-0.01f64, 0.01..0.3f64],
    ) {
        let cfg = saddle_config(eq, c, g);
        prop_assume!(cfg.is_some());
        let (p, x0, alpha) = cfg.unwrap();
        let sol = assemble(eq, p, x0, 15, &Build::Mirror { a1 }).unwrap();
        prop_assert_eq!(sol.junction_jump, 0.0);
        let reach = 6.0 / alpha;
        let grid: Vec<f64> = (1..=60).map(|i| reach * i as f64 / 60.0).collect();
        let neg: Vec<f64> = grid.iter().map(|z| -z).collect();
        let right = residual_scan(&sol, &grid);
        let left = residual_scan(&sol, &neg);
        for ((z, r), (_, l)) in right.profile.iter().zip(&left.profile) {
            prop_assert!((r - l).abs() <= 1e-10, "{eq} z={z}: {r:e} vs {l:e}");
        }
    }

    #[test]
    fn wave_translation_identity(
        (eq, c, g) in saddle_case(EquationId::ALL.to_vec()),
        a1 in prop_oneof![-0.2..-0.01f64, 0.01..0.2f64],
        x in -5.0..5.0f64,
        t in -3.0..3.0f64,
    ) {
        let cfg = saddle_config(eq, c, g);
        prop_assume!(cfg.is_some());
        let (p, x0, _) = cfg.unwrap();
        let strategy = if eq.is_reversible() {
            Build::Mirror { a1 }
        } else {
            Build::MatchedLeft { a1, prefer: None }
        };
        let Ok(sol) = assemble(eq, p, x0, 10, &strategy) else { return Ok(()) };
        let u0 = evaluate_wave(&sol, x, 0.0);
        let ut = evaluate_wave(&sol, x + c * t, t);
        prop_assert!((u0 - ut).abs() <= 1e-12 * u0.abs().max(1.0), "{u0} vs {ut}");
    }

    #[test]
    fn continuity_roots_back_substitute(
        (eq, c, g) in saddle_case(EquationId::ALL.to_vec()),
        target in -0.5..0.5f64,
        m in 4usize..=25,
    ) {
        let cfg = saddle_config(eq, c, g);
        prop_assume!(cfg.is_some());
        let (p, x0, _) = cfg.unwrap();
        for a in solve_continuity(eq, p, x0, m, target).unwrap() {
            let b = build_branch(eq, p, x0, a, m, Side::Right).unwrap();
            if b.overflowed {
                continue;
            }
            // Roots with huge coefficients hit the rounding floor of the sum.
            let sum: f64 = b.coefficients.iter().map(|a| a.abs()).sum();
            let tol = 1e-9f64.max(64.0 * f64::EPSILON * sum);
            let miss = (b.junction_value() - target).abs();
            prop_assert!(miss <= tol, "{eq} c={c} g={g} M={m} root {a}: miss {miss:e}");
        }
    }

    #[test]
    fn truncation_dominates_branch_residual(
        (eq, c, g) in saddle_case(EquationId::ALL.to_vec()),
        a1 in prop_oneof![-0.3..-0.01f64, 0.01..0.3f64],
        m in 3usize..=12,
    ) {
        let cfg = saddle_config(eq, c, g);
        prop_assume!(cfg.is_some());
        let (p, x0, alpha) = cfg.unwrap();
        let b = build_branch(eq, p, x0, a1, m, Side::Right).unwrap();
        prop_assume!(!b.overflowed);
        let rate = (m as f64 + 1.0) * b.exponent;
        let (z_min, z_max) = (2.0 / alpha, 10.0f64.max(2.0 / alpha + 1.0));
        let zs: Vec<f64> = (0..=80).map(|i| z_min + (z_max - z_min) * i as f64 / 80.0).collect();
        let res: Vec<f64> = zs
            .iter()
            .map(|&z| {
                let (f, d1, d2) = b.derivatives(z);
                traveling_residual(eq, p, f, d1, d2).abs()
            })
            .collect();
        // Fit the tail constant on the first unit of z; everything further out
        // must stay under it, up to a rounding floor.
        let fit = zs
            .iter()
            .zip(&res)
            .take_while(|(z, _)| **z <= z_min + 1.0)
            .map(|(z, r)| r / (rate * z).exp())
            .fold(0.0f64, f64::max);
        let floor = 1e-13 * (1.0 + x0.abs() + c.abs()).powi(3);
        for (z, r) in zs.iter().zip(&res) {
            let bound = 10.0 * fit * (rate * z).exp() + floor;
            prop_assert!(*r <= bound, "{eq} c={c} g={g} M={m} z={z}: {r:e} > {bound:e}");
        }
    }

    #[test]
    fn gch2_zero_g_left_branch_is_exact(
        cm in 0.1..5.0f64, neg in any::<bool>(), b1 in -2.0..2.0f64, z in -20.0..-0.01f64,
    ) {
        let c = if neg { -cm } else { cm };
        let p = WaveParams::new(c, 0.0).unwrap();
        let b = build_branch(EquationId::Gch2, p, 0.0, b1, 30, Side::Left).unwrap();
        let (f, d1, d2) = b.derivatives(z);
        let r = traveling_residual(EquationId::Gch2, p, f, d1, d2);
        prop_assert!(r.abs() <= 1e-10, "c={c} b1={b1} z={z}: {r:e}");
    }

    #[test]
    fn reversible_equations_are_even_in_derivative(
        eq in reversible(), c in 0.1..3.0f64, g in -1.0..1.0f64,
        phi in -2.0..2.0f64, d1 in -2.0..2.0f64, d2 in -2.0..2.0f64,
    ) {
        let p = WaveParams::new(c, g).unwrap();
        prop_assert_eq!(traveling_residual(eq, p, phi, d1, d2), traveling_residual(eq, p, phi, -d1, d2));
    }
}
