use deficit_core::analytic::eval_expansion;
use deficit_core::bounds::{certificate_coefficients, BoundHypothesis};
use deficit_core::coeffs::{
    factorial, int, parse_rational, pow2, ratio, t_coeff, thm21_expansion, thm29_coeff,
    thm29_expansion, u_polynomial,
};
use deficit_core::{AisTable, PrimeEngine, Rational, Side};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-500i64..500, 1i64..40).prop_map(|(n, d)| ratio(n, d))
}

fn coeff_list(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), len)
}

fn hypothesis() -> impl Strategy<Value = BoundHypothesis> {
    (2u32..=9, any::<bool>())
        .prop_flat_map(|(m, upper)| (Just(m), Just(upper), coeff_list(m as usize - 1), rational()))
        .prop_map(|(m, upper, a, lambda)| BoundHypothesis {
            side: if upper { Side::Upper } else { Side::Lower },
            m,
            a,
            cutoff: 11,
            li_cutoff: int(4171),
            lambda: upper.then_some(lambda),
        })
}

/// `(k−1)!/2^k + (k−1)! 2^{1−k} t_{m−1,1} − t_{m−1,k}`, the form before simplification.
fn unsimplified(h: &BoundHypothesis, k: u32) -> Rational {
    let m = h.m;
    let f = Rational::from_integer(factorial(k - 1));
    let t1 = t_coeff(&h.a, m - 1, 1).unwrap();
    let tk = t_coeff(&h.a, m - 1, k).unwrap();
    &f / Rational::from_integer(pow2(k)) + &f * int(2) / Rational::from_integer(pow2(k)) * t1 - tk
}

#[test]
fn u1_for_shifted_table() {
    let a = AisTable::new(1, [((0, 1), int(0)), ((1, 1), int(1))]).unwrap();
    assert_eq!(u_polynomial(1, &a).unwrap().coeffs(), &[ratio(1, 2), int(1)]);
}

#[test]
fn thm29_coefficients() {
    let want = [ratio(1, 2), ratio(3, 4), ratio(7, 4), ratio(45, 8), ratio(93, 4), ratio(945, 8), ratio(5715, 8)];
    for (k, w) in (1..).zip(want) {
        assert_eq!(thm29_coeff(k).unwrap(), w);
    }
}

#[test]
fn first_order_expansion_tracks_exact_deficit() {
    let engine = PrimeEngine::with_capacity(20_000_000).unwrap();
    let n = 1_000_000u64;
    let c = engine.cn_exact(n).unwrap() as f64;
    let e = thm21_expansion(1, &AisTable::builtin_m2()).unwrap();
    let approx = eval_expansion(&e, n as f64).unwrap();
    let rel = (approx - c) / c;
    // remainder O((log log n)²/log² n)
    assert!(rel.abs() < 0.02, "relative gap {rel}");

    let p = engine.nth_prime(n).unwrap() as f64;
    let by_p = eval_expansion(&thm29_expansion(4).unwrap(), p).unwrap();
    assert!(((by_p - c) / c).abs() < 0.01);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_coefficients_simplify(h in hypothesis()) {
        let c = certificate_coefficients(&h).unwrap();
        let top = if h.side == Side::Upper { h.m - 2 } else { h.m - 1 };
        for k in 1..=top {
            prop_assert_eq!(&c[k as usize - 1], &unsimplified(&h, k));
        }
        if let Some(lambda) = &h.lambda {
            let m = h.m;
            let t1 = t_coeff(&h.a, m - 1, 1).unwrap();
            let tl = t_coeff(&h.a, m - 1, m - 1).unwrap();
            let want = (int(1) + int(2) * t1) * lambda / Rational::from_integer(pow2(m - 1)) - tl;
            prop_assert_eq!(&c[m as usize - 2], &want);
        }
    }

    #[test]
    fn t_is_linear(a in coeff_list(8), b in coeff_list(8), s in rational(), i in 0u32..9, j in 1u32..9) {
        let sum: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y * &s).collect();
        let lhs = t_coeff(&sum, i, j).unwrap();
        let rhs = t_coeff(&a, i, j).unwrap() + t_coeff(&b, i, j).unwrap() * &s;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn t_telescopes(a in coeff_list(8), i in 1u32..9, k in 1u32..9) {
        // (k−1)! 2^{1−k} (t_{i,1} − t_{k−1,1}) = t_{i,k} for k ≤ i
        prop_assume!(k <= i);
        let scale = Rational::from_integer(factorial(k - 1) * BigInt::from(2)) / Rational::from_integer(pow2(k));
        let lhs = scale * (t_coeff(&a, i, 1).unwrap() - t_coeff(&a, k - 1, 1).unwrap());
        prop_assert_eq!(lhs, t_coeff(&a, i, k).unwrap());
    }

    #[test]
    fn u_polynomials_are_monic(entries in prop::collection::vec(rational(), 14)) {
        let m = 4u32;
        let mut it = entries.into_iter();
        let mut table = Vec::new();
        for s in 1..=m {
            for i in 0..=s {
                let v = if i == s { int(1) } else { it.next().unwrap() };
                table.push(((i, s), v));
            }
        }
        let a = AisTable::new(m, table).unwrap();
        for s in 1..=m {
            let u = u_polynomial(s, &a).unwrap();
            prop_assert!(u.is_monic());
            prop_assert_eq!(u.degree(), Some(s as usize));
        }
        let u1 = u_polynomial(1, &a).unwrap();
        prop_assert_eq!(&u1.coeffs()[0], &(a.get(0, 1) + ratio(1, 2)));
    }

    #[test]
    fn rationals_are_canonical(n in -10_000i64..10_000, d in 1i64..10_000, k in 1i64..50) {
        let r = parse_rational(&format!("{}/{}", n * k, -d * k)).unwrap();
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one() || r.numer().is_zero());
        prop_assert_eq!(r, ratio(-n, d));
    }

    #[test]
    fn expansion_evaluation_is_linear(m1 in 2u32..8, m2 in 2u32..8, x in 3.0f64..1e12) {
        let e1 = thm29_expansion(m1).unwrap();
        let e2 = thm29_expansion(m2).unwrap();
        let sum = e1.plus(&e2).unwrap();
        let lhs = eval_expansion(&sum, x).unwrap();
        let rhs = eval_expansion(&e1, x).unwrap() + eval_expansion(&e2, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
    }
}
