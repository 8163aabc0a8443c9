use deficit_core::analytic::{
    li, li_bound_check, quadrature_identity_residual, EvaluatedBound, Identity, LiBound,
};
use deficit_core::bounds::{builtin_certificates, evaluate_certificate};
use deficit_core::coeffs::{int, thm29_expansion};
use deficit_core::analytic::eval_expansion;
use proptest::prelude::*;

/// `γ + ln ln x + Σ_{k≥1} (ln x)^k/(k·k!)`
fn li_series(x: f64) -> f64 {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    let y = x.ln();
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..400 {
        term *= y / k as f64;
        let t = term / k as f64;
        sum += t;
        if t < sum * 1e-18 {
            break;
        }
    }
    GAMMA + y.ln() + sum
}

#[test]
fn li_reference_points() {
    let v = li(121.0, 1e-13).unwrap();
    assert!(v.lower() >= 34.59);
    assert!((v.value - 34.591_506_269_014_06).abs() < 1e-10);
    let m = li_bound_check(LiBound::Lower4171, 4171.0).unwrap();
    assert!(m.value >= 0.00019 - m.abs_err);
    assert!(li_bound_check(LiBound::Upper1e16, 1e16).unwrap().lower() > 0.0);
    assert!(li_bound_check(LiBound::Upper1e18, 1e18).unwrap().lower() > 0.0);
}

#[test]
fn truncation_sandwich() {
    // at 10¹² the order-8 truncation sits between the two closed-form certificates
    let (lower, upper) = builtin_certificates();
    let p = 1e12;
    let trunc = eval_expansion(&thm29_expansion(8).unwrap(), p).unwrap();
    let l = evaluate_certificate(&lower, p).unwrap();
    let u = evaluate_certificate(&upper, p).unwrap();
    assert!(l.upper() < trunc && trunc < u.lower(), "{l:?} {trunc} {u:?}");
}

#[test]
fn bound_arithmetic_widens() {
    let a = EvaluatedBound::new(1.0, 0.5);
    let b = EvaluatedBound::new(2.0, 0.25);
    let s = a + b;
    assert!(s.contains(2.25) && s.contains(3.75));
    assert!((a - b).contains(-1.75));
    assert!((-a).contains(-1.5));
}

fn check(identity: Identity) -> Result<(), TestCaseError> {
    let r = quadrature_identity_residual(&identity).unwrap();
    prop_assert!(r.residual.abs() <= 1e-9, "{identity:?}: {r:?}");
    prop_assert!(r.residual.abs() <= r.tolerance, "{identity:?}: {r:?}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn li_agrees_with_series(x in 1.5f64..1e3) {
        let v = li(x, 1e-13).unwrap();
        let want = li_series(x);
        prop_assert!((v.value - want).abs() <= v.abs_err + 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn li_difference(a in 1.5f64..10.0, x in 10.0f64..=100.0) {
        check(Identity::LiDifference { a, x })?;
    }

    #[test]
    fn li_difference_squared(a in 1.5f64..10.0, x in 10.0f64..=100.0) {
        check(Identity::LiDifferenceSquared { a, x })?;
    }

    #[test]
    fn parts_step(r in 1.5f64..10.0, s in 10.0f64..=100.0, n in 1u32..=8) {
        check(Identity::PartsStep { n, r, s })?;
    }

    #[test]
    fn reduce_to_square(r in 1.5f64..10.0, s in 10.0f64..=100.0, m in 2u32..=9) {
        check(Identity::ReduceToSquare { m, r, s })?;
    }

    #[test]
    fn combination(r in 1.5f64..10.0, s in 10.0f64..=100.0, a in prop::collection::vec(-50i64..50, 1..=8)) {
        let a = a.into_iter().map(int).collect();
        check(Identity::Combination { a, r, s })?;
    }
}
