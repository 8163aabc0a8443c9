use alloc::vec::Vec;

use super::EvaluatedBound;
use crate::coeffs::{parse_rational, to_f64, AsymptoticExpansion, Rational};
use crate::error::{domain, Result};
use crate::fmath::{ln, powi, KahanSum, EPS};

/// `Σ c_k · factor / log^k x` with a rounding-error bound. `factor_err` is
/// the absolute error already present in `factor`.
pub fn log_series(
    coeffs: &[(u32, Rational)],
    x: f64,
    factor: f64,
    factor_err: f64,
) -> Result<EvaluatedBound> {
    LogSeries::new(coeffs).eval(x, factor, factor_err)
}

/// A [`log_series`] with its coefficients converted once, for repeated
/// evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSeries {
    terms: Vec<(i32, f64)>,
}

impl LogSeries {
    pub fn new(coeffs: &[(u32, Rational)]) -> Self {
        Self {
            terms: coeffs.iter().map(|(k, c)| (*k as i32, to_f64(c))).collect(),
        }
    }

    pub fn eval(&self, x: f64, factor: f64, factor_err: f64) -> Result<EvaluatedBound> {
        if x.is_nan() || x <= 1.0 {
            return Err(domain!("log series needs x > 1, got {x}"));
        }
        let l = ln(x);
        let mut sum = KahanSum::default();
        let mut err = 0.0;
        let n = self.terms.len() as f64;
        for &(k, c) in &self.terms {
            let term = c * factor / powi(l, k);
            sum.add(term);
            err += term.abs() * (2.0 * k as f64 + 6.0 + n) * EPS;
            if factor != 0.0 {
                err += (term / factor).abs() * factor_err;
            }
        }
        Ok(EvaluatedBound::new(sum.value(), err))
    }
}

/// Numeric value of an expansion's main terms at `x`; the remainder is a
/// descriptor and contributes nothing.
pub fn eval_expansion(e: &AsymptoticExpansion, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(domain!("expansions are evaluated at x > 1, got {x}"));
    }
    let l = ln(x);
    if e.has_loglog() && x <= core::f64::consts::E {
        return Err(domain!("log log x must be positive, got x = {x}"));
    }
    let ll = if x > 1.0 { ln(l) } else { 0.0 };
    let scale = e.scale().factor(x);
    let mut sum = KahanSum::default();
    for t in e.terms() {
        let v = to_f64(&t.coeff) * powi(l, -t.inv_log_power) * powi(ll, t.loglog_power as i32);
        sum.add(v * scale);
    }
    Ok(sum.value())
}

fn decimal_over(text: &str, den: i64) -> Rational {
    parse_rational(text).expect("static decimal") / crate::coeffs::int(den)
}

/// Coefficients of `p²/log^k p`, `k = 4..7`, in the order-8 tail of `C_n`.
pub fn chi_coefficients() -> Vec<(u32, Rational)> {
    alloc::vec![
        (4, decimal_over("45", 8)),
        (5, decimal_over("93", 4)),
        (6, decimal_over("945", 8)),
        (7, decimal_over("5715", 8)),
    ]
}

/// Coefficients of `p²/log^k p`, `k = 4..8`, of the explicit lower bound tail.
pub fn theta_coefficients() -> Vec<(u32, Rational)> {
    alloc::vec![
        (4, decimal_over("43.6", 8)),
        (5, decimal_over("90.9", 4)),
        (6, decimal_over("927.5", 8)),
        (7, decimal_over("702.5625", 1)),
        (8, decimal_over("4942.21875", 1)),
    ]
}

/// Coefficients of `p²/log^k p`, `k = 4..8`, of the explicit upper bound tail.
pub fn omega_coefficients() -> Vec<(u32, Rational)> {
    alloc::vec![
        (4, decimal_over("46.4", 8)),
        (5, decimal_over("95.1", 4)),
        (6, decimal_over("962.5", 8)),
        (7, decimal_over("5809.5", 8)),
        (8, decimal_over("59424", 8)),
    ]
}

fn tail(coeffs: &[(u32, Rational)], p: f64) -> Result<f64> {
    if p.is_nan() || p <= 1.0 {
        return Err(domain!("closed-form tails need p > 1, got {p}"));
    }
    Ok(log_series(coeffs, p, p * p, 0.0)?.value)
}

pub fn chi(p: f64) -> Result<f64> {
    tail(&chi_coefficients(), p)
}

pub fn theta(p: f64) -> Result<f64> {
    tail(&theta_coefficients(), p)
}

pub fn omega(p: f64) -> Result<f64> {
    tail(&omega_coefficients(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{ratio, thm29_coeff, thm29_expansion, AsymptoticExpansion, RemainderOrder, Scale};
    use core::f64::consts::E;

    #[test]
    fn tails_at_e() {
        let want = 45.0 / 8.0 + 93.0 / 4.0 + 945.0 / 8.0 + 5715.0 / 8.0;
        assert!((chi(E).unwrap() / (E * E) - want).abs() < 1e-12);
        assert!(theta(1.0).is_err());
        assert!(omega(0.5).is_err());
    }

    #[test]
    fn tail_coefficients_exact() {
        let th: Vec<_> = theta_coefficients().into_iter().map(|(_, c)| c).collect();
        assert_eq!(th, [ratio(109, 20), ratio(909, 40), ratio(1855, 16), ratio(11241, 16), ratio(158151, 32)]);
        let om: Vec<_> = omega_coefficients().into_iter().map(|(_, c)| c).collect();
        assert_eq!(om, [ratio(29, 5), ratio(951, 40), ratio(1925, 16), ratio(11619, 16), ratio(7428, 1)]);
        for (k, c) in chi_coefficients() {
            assert_eq!(c, thm29_coeff(k).unwrap());
        }
        // the lower tail sits term-wise under the upper one
        for ((_, t), (_, o)) in theta_coefficients().iter().zip(omega_coefficients().iter()) {
            assert!(t < o);
        }
    }

    #[test]
    fn empty_and_scalar_expansions() {
        let e = AsymptoticExpansion::new(Scale::Square, RemainderOrder::Exact);
        assert_eq!(eval_expansion(&e, 10.0).unwrap(), 0.0);
        let two = thm29_expansion(2).unwrap();
        let v = eval_expansion(&two, 1000.0).unwrap();
        let want = 1e6 / (2.0 * ln(1000.0));
        assert!((v - want).abs() <= 1e-12 * want);
        assert!((v - 72_382.413_650_542_4).abs() < 1e-6);
    }

    #[test]
    fn loglog_domain() {
        let mut e = AsymptoticExpansion::new(Scale::Unit, RemainderOrder::Exact);
        e.add(ratio(1, 1), 0, 1);
        assert!(eval_expansion(&e, 2.0).is_err());
        assert!(eval_expansion(&e, 3.0).is_ok());
        assert!(eval_expansion(&e, 1.0).is_err());
    }
}
