mod common;

use common::{g_in_saddle_range, saddle_config, speed};
use gchtw_core::oracle::{extract_recurrence, recurrence_mismatch};
use gchtw_core::EquationId;
use proptest::prelude::*;

const K_MAX: usize = 10;
const MISMATCH_TOL: f64 = 1e-9;

fn check(eq: EquationId, cm: f64, neg: bool, s: f64, left: bool) -> Result<(), TestCaseError> {
    let c = speed(eq, cm, neg);
    let g = g_in_saddle_range(eq, c, s);
    let cfg = saddle_config(eq, c, g);
    prop_assume!(cfg.is_some());
    let (p, x0, alpha) = cfg.unwrap();
    let exponent = if left { alpha } else { -alpha };
    let ext = extract_recurrence(eq, p, x0, exponent, K_MAX).unwrap();
    let mismatch = recurrence_mismatch(&ext, eq, p, x0);
    prop_assert!(mismatch <= MISMATCH_TOL, "{eq} c={c} g={g} x0={x0}: mismatch {mismatch:e}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn oracle_matches_gch1(cm in 0.2..3.0f64, neg in any::<bool>(), s in 0.02..0.98f64, left in any::<bool>()) {
        check(EquationId::Gch1, cm, neg, s, left)?;
    }

    #[test]
    fn oracle_matches_gch2(cm in 0.2..3.0f64, neg in any::<bool>(), s in 0.02..0.98f64, left in any::<bool>()) {
        check(EquationId::Gch2, cm, neg, s, left)?;
    }

    #[test]
    fn oracle_matches_gch3(cm in 0.2..3.0f64, neg in any::<bool>(), s in 0.02..0.98f64, left in any::<bool>()) {
        check(EquationId::Gch3, cm, neg, s, left)?;
    }
}
