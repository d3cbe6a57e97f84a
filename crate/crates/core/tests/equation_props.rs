mod common;

use gchtw_core::{build_system, equilibria, traveling_residual, EquationId, SystemClass, WaveParams};
use proptest::prelude::*;

fn any_eq() -> impl Strategy<Value = EquationId> {
    prop::sample::select(EquationId::ALL.to_vec())
}

fn nonzero_speed() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]
}

proptest! {
    #[test]
    fn equilibria_zero_the_residual(eq in any_eq(), c in nonzero_speed(), g in -3.0..3.0f64) {
        let p = WaveParams::new(c, g).unwrap();
        for r in equilibria(eq, p) {
            let res = traveling_residual(eq, p, r.value, 0.0, 0.0);
            let scale = 1.0 + r.value.abs().powi(3) + c.abs() * r.value.abs() + g.abs();
            prop_assert!(res.abs() <= 1e-10 * scale, "{eq} c={c} g={g}: root {} residual {res:e}", r.value);
        }
    }

    #[test]
    fn equilibria_sorted_and_repeatable(eq in any_eq(), c in nonzero_speed(), g in -3.0..3.0f64) {
        let p = WaveParams::new(c, g).unwrap();
        let a = equilibria(eq, p);
        let b = equilibria(eq, p);
        prop_assert!(a.windows(2).all(|w| w[0].value < w[1].value));
        let bits = |v: &[gchtw_core::poly::RealRoot]| v.iter().map(|r| r.value.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn type_two_integrability_identity(
        eq in prop::sample::select(vec![EquationId::Gch2, EquationId::Gch3]),
        c in nonzero_speed(),
        g in -3.0..3.0f64,
        pts in prop::collection::vec((-4.0..4.0f64, -4.0..4.0f64), 100),
    ) {
        let p = WaveParams::new(c, g).unwrap();
        let sys = build_system(eq, p);
        prop_assert_eq!(sys.class, SystemClass::TypeTwo);
        let defect = sys.integrability_defect();
        let parts = [sys.numerator.clone(), sys.denominator.clone()];
        for (phi, y) in pts {
            let r = 1.0 + phi.abs() + y.abs();
            let scale: f64 = parts
                .iter()
                .map(|q| q.terms().map(|(i, j, v)| v.abs() * r.powi((i + j) as i32)).sum::<f64>())
                .product::<f64>()
                .max(1.0);
            let v = defect.eval(phi, y);
            prop_assert!(v.abs() <= 1e-12 * scale, "{eq} at ({phi}, {y}): {v:e}");
        }
    }

    #[test]
    fn gch3_root_count_follows_sign_analysis(c in 0.05..5.0f64, s in -2.0..2.0f64) {
        let bound = 2.0 * c / 3.0 * (c / 3.0).sqrt();
        prop_assume!((s.abs() - 1.0).abs() > 1e-6);
        let g = s * bound;
        let n = equilibria(EquationId::Gch3, WaveParams::new(c, g).unwrap()).len();
        prop_assert_eq!(n, if s.abs() < 1.0 { 3 } else { 1 });
    }
}
