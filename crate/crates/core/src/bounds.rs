//! Explicit bound certificates for `C_n`.
//!
//! A hypothesis pairs a one-sided bound `π(x) ≷ x/log x + Σ_{k=2}^{m} a_k x/log^k x`
//! (valid for `x ≥ cutoff`) with a one-sided bound on `li` (valid for
//! `x ≥ li_cutoff`). Integrating the `π` bound from the cutoff to `p_n` and
//! folding the powers of `1/log` into `li` gives
//!
//! `C_n ≷ d + Σ_k c_k p_n²/log^k p_n`  for `n ≥ max{π(cutoff)+1, π(√li_cutoff)+1}`
//!
//! with `c_k = ((k−1)!/2^k)(1 + 2 t_{k−1,1})` and, on the upper side, the last
//! coefficient replaced by `(1 + 2t_{m−1,1})λ/2^{m−1} − a_m/(m−1)`. The
//! constant is
//!
//! `d = ∫₂^{cutoff} π(x) dx − (1 + 2t_{m−1,1}) li(cutoff²) + Σ_{k=1}^{m−1} t_{m−1,k} cutoff²/log^k cutoff`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::analytic::{li, log_series, omega_coefficients, theta_coefficients, EvaluatedBound, LiBound};
use crate::coeffs::{factorial, int, parse_rational, pow2, ratio, t_coeff, to_f64, Rational};
use crate::engine::PrimeEngine;
use crate::error::{domain, Result};
use crate::fmath::{ceil, floor, i128_to_f64_err, isqrt, ln, powi, u128_to_f64_err, EPS};

/// Relative tolerance used for `li(cutoff²)` in certificate constants.
pub const CONSTANT_LI_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundHypothesis {
    pub side: Side,
    pub m: u32,
    /// `a₂, …, a_m`
    pub a: Vec<Rational>,
    /// The `π` inequality holds for every `x ≥ cutoff`.
    pub cutoff: u64,
    /// The `li` inequality holds for every `x ≥ li_cutoff`.
    pub li_cutoff: Rational,
    /// Coefficient of `x/log^{m−1} x` in the upper `li` bound; upper side only.
    pub lambda: Option<Rational>,
}

fn decimals(values: &[&str]) -> Vec<Rational> {
    values
        .iter()
        .map(|v| parse_rational(v).expect("static decimal"))
        .collect()
}

impl BoundHypothesis {
    /// Lower `π` bound with `a = (1, 2, 5.65, 23.65, 118.25, 709.5, 4966.5, 0)`
    /// from `x₀ = 1332450001 = p_66773604`, and the factorial lower bound on
    /// `li` from 4171.
    pub fn builtin_lower() -> Self {
        Self {
            side: Side::Lower,
            m: 9,
            a: decimals(&["1", "2", "5.65", "23.65", "118.25", "709.5", "4966.5", "0"]),
            cutoff: 1_332_450_001,
            li_cutoff: int(4171),
            lambda: None,
        }
    }

    /// Upper `π` bound with `a = (1, 2, 6.35, 24.35, 121.75, 730.5, 6801.4, 0)`
    /// from `x₁ = 11`, and the upper `li` bound with `λ = 6300` from 10¹⁸.
    pub fn builtin_upper() -> Self {
        Self {
            side: Side::Upper,
            m: 9,
            a: decimals(&["1", "2", "6.35", "24.35", "121.75", "730.5", "6801.4", "0"]),
            cutoff: 11,
            li_cutoff: parse_rational("1e18").expect("static"),
            lambda: Some(int(6300)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(domain!("hypothesis needs m >= 2, got {}", self.m));
        }
        if self.a.len() != self.m as usize - 1 {
            return Err(domain!(
                "hypothesis with m = {} needs {} coefficients a_2..a_m, got {}",
                self.m,
                self.m - 1,
                self.a.len()
            ));
        }
        if self.cutoff < 2 {
            return Err(domain!("cutoff must exceed 1, got {}", self.cutoff));
        }
        if self.li_cutoff.is_negative() {
            return Err(domain!("li cutoff must be nonnegative"));
        }
        match (self.side, &self.lambda) {
            (Side::Upper, None) => Err(domain!("upper hypotheses need lambda")),
            (Side::Lower, Some(_)) => Err(domain!("lower hypotheses take no lambda")),
            _ => Ok(()),
        }
    }

    /// `1 + 2 t_{m−1,1}`, the multiplier of `li` in the constant.
    pub fn li_weight(&self) -> Result<Rational> {
        Ok(int(1) + int(2) * t_coeff(&self.a, self.m - 1, 1)?)
    }

    /// Right side of the `π` inequality, `x/log x + Σ a_k x/log^k x`.
    pub fn pi_series(&self, x: f64) -> Result<EvaluatedBound> {
        let mut coeffs = alloc::vec![(1u32, int(1))];
        coeffs.extend(self.a.iter().enumerate().map(|(i, a)| (i as u32 + 2, a.clone())));
        log_series(&coeffs, x, x, 0.0)
    }

    /// `⌊√li_cutoff⌋`, computed in integers.
    pub fn li_cutoff_root(&self) -> u64 {
        let fl = self.li_cutoff.floor().to_integer();
        let fl: u64 = fl.try_into().unwrap_or(u64::MAX);
        isqrt(fl)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Hypothesis(BoundHypothesis),
    /// A published closed form, named.
    ClosedForm(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub id: String,
    pub side: Side,
    /// `d₀` or `d₁`.
    pub constant: EvaluatedBound,
    /// `c_1, …, c_{m−1}`; `coeffs[k−1]` multiplies `p²/log^k p`.
    pub coeffs: Vec<Rational>,
    pub n_min: u64,
    pub provenance: Provenance,
}

/// Exact certificate coefficients `c_1..c_{m−1}`.
pub fn certificate_coefficients(h: &BoundHypothesis) -> Result<Vec<Rational>> {
    h.validate()?;
    let m = h.m;
    let mut out = Vec::with_capacity(m as usize - 1);
    for k in 1..m {
        let t = t_coeff(&h.a, k - 1, 1)?;
        out.push(Rational::new(factorial(k - 1), pow2(k)) * (int(1) + int(2) * t));
    }
    if let (Side::Upper, Some(lambda)) = (h.side, &h.lambda) {
        let last = h.li_weight()? * lambda / Rational::from_integer(pow2(m - 1))
            - &h.a[m as usize - 2] / int(m as i64 - 1);
        out[m as usize - 2] = last;
    }
    Ok(out)
}

/// Builds the certificate for `h`, with the exact step integral of `π`
/// from the engine and `li(cutoff²)` by quadrature.
pub fn make_certificate(h: &BoundHypothesis, engine: &PrimeEngine) -> Result<BoundCertificate> {
    h.validate()?;
    let coeffs = certificate_coefficients(h)?;
    let n_min = (engine.prime_count(h.cutoff)? + 1).max(engine.prime_count(h.li_cutoff_root())? + 1);

    let integral = engine.pi_integral_to(h.cutoff)?;
    let (integral, integral_err) = i128_to_f64_err(integral);

    let x = h.cutoff;
    let (x2, x2_err) = u128_to_f64_err(x as u128 * x as u128);
    let li_x2 = li(x2, CONSTANT_LI_REL_TOL)?;
    let li_x2 = EvaluatedBound::new(li_x2.value, li_x2.abs_err + x2_err / ln(x2));
    let weight = to_f64(&h.li_weight()?);
    let weighted = li_x2.scale(weight);
    let weighted = EvaluatedBound::new(weighted.value, weighted.abs_err + EPS * weighted.value.abs());

    let t_terms: Vec<(u32, Rational)> = (1..h.m)
        .map(|k| t_coeff(&h.a, h.m - 1, k).map(|t| (k, t)))
        .collect::<Result<_>>()?;
    let boundary = log_series(&t_terms, x as f64, x2, x2_err)?;

    let constant = EvaluatedBound::new(integral, integral_err) - weighted + boundary;
    Ok(BoundCertificate {
        id: alloc::format!("{}-m{}-x{}", h.side.name(), h.m, h.cutoff),
        side: h.side,
        constant,
        coeffs,
        n_min,
        provenance: Provenance::Hypothesis(h.clone()),
    })
}

/// `constant + Σ c_k p²/log^k p` at `p > 1`.
pub fn evaluate_certificate(c: &BoundCertificate, p: f64) -> Result<EvaluatedBound> {
    if p.is_nan() || p <= 1.0 {
        return Err(domain!("certificates are evaluated at p > 1, got {p}"));
    }
    let terms: Vec<(u32, Rational)> = c
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| (i as u32 + 1, v.clone()))
        .collect();
    let p2 = p * p;
    Ok(c.constant + log_series(&terms, p, p2, EPS * p2)?)
}

/// The two published closed-form bounds:
/// `p²/(2 log p) + 3p²/(4 log² p) + 7p²/(4 log³ p) + Θ(p)` for `n ≥ 52703656`
/// (lower) and the same leading terms `+ Ω(p)` for every `n ≥ 1` (upper).
pub fn builtin_certificates() -> (BoundCertificate, BoundCertificate) {
    let lead = [ratio(1, 2), ratio(3, 4), ratio(7, 4)];
    let build = |id: &str, side, tail: Vec<(u32, Rational)>, n_min| {
        let mut coeffs: Vec<Rational> = lead.to_vec();
        coeffs.extend(tail.into_iter().map(|(_, c)| c));
        BoundCertificate {
            id: id.to_string(),
            side,
            constant: EvaluatedBound::exact(0.0),
            coeffs,
            n_min,
            provenance: Provenance::ClosedForm(id.to_string()),
        }
    };
    (
        build("prop53_lower", Side::Lower, theta_coefficients(), 52_703_656),
        build("prop56_upper", Side::Upper, omega_coefficients(), 1),
    )
}

/// Earlier lower bound `−47.1 + p²/(2 log p) + 3p²/(4 log² p)`, for comparison.
pub fn dusart_reference(p: f64) -> Result<f64> {
    if p.is_nan() || p <= 1.0 {
        return Err(domain!("reference bound needs p > 1, got {p}"));
    }
    let l = ln(p);
    Ok(-47.1 + p * p / (2.0 * l) + 3.0 * p * p / (4.0 * l * l))
}

/// Magnitudes `μ_k` such that substituting an explicit `li` bound into the
/// constant gives `d ≥ ∫₂^{cutoff} π − Σ_k μ_k cutoff²/log^k cutoff` (lower
/// side, upper `li` bound) or `d ≤ …` (upper side, lower `li` bound).
///
/// `μ_k = (1 + 2t_{m−1,1}) c_k / 2^k − t_{m−1,k}`, where `c_k` are the `li`
/// series coefficients (`li(x²)` turns `x/log^k x` into `x²/(2^k log^k x)`).
/// Zero magnitudes are omitted.
pub fn substituted_magnitudes(h: &BoundHypothesis, bound: LiBound) -> Result<Vec<(u32, Rational)>> {
    h.validate()?;
    let weight = h.li_weight()?;
    if !weight.is_positive() {
        return Err(domain!("li weight 1 + 2t must be positive to substitute a bound"));
    }
    if bound.is_upper() != (h.side == Side::Lower) {
        return Err(domain!(
            "a {} certificate constant needs an {} li bound",
            h.side.name(),
            if h.side == Side::Lower { "upper" } else { "lower" }
        ));
    }
    let li_coeffs = bound.coefficients();
    let top = (li_coeffs.len() as u32).max(h.m - 1);
    let mut out = Vec::new();
    for k in 1..=top {
        let from_li = li_coeffs
            .get(k as usize - 1)
            .map(|&c| &weight * int(c) / Rational::from_integer(pow2(k)))
            .unwrap_or_else(Rational::zero);
        let from_t = if k < h.m { t_coeff(&h.a, h.m - 1, k)? } else { Rational::zero() };
        let mu = from_li - from_t;
        if !mu.is_zero() {
            out.push((k, mu));
        }
    }
    Ok(out)
}

/// Hand-checkable estimate of a certificate constant: each term
/// `μ_k x²/L^k` is evaluated at a lower bound `L ≤ log x` and rounded up to a
/// multiple of `resolution`, so the rounded total bounds the true sum from
/// above.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantLedger {
    pub magnitudes: Vec<(u32, Rational)>,
    pub log_bound: f64,
    pub resolution: u128,
    pub rounded_terms: Vec<u128>,
    pub total: u128,
}

impl ConstantLedger {
    /// `∫π − total`, a valid estimate of the constant (from below on the
    /// lower side).
    pub fn estimate(&self, pi_integral: i128) -> i128 {
        pi_integral - self.total as i128
    }
}

/// `⌊log x · 10^digits⌋ / 10^digits`, a lower bound on `log x` with the
/// given number of decimals.
pub fn log_lower_bound(x: u64, digits: u32) -> f64 {
    let scale = libm::pow(10.0, digits as f64);
    floor(ln(x as f64) * scale * (1.0 - 4.0 * EPS)) / scale
}

pub fn constant_ledger(
    h: &BoundHypothesis,
    bound: LiBound,
    log_bound: f64,
    resolution: u128,
) -> Result<ConstantLedger> {
    if resolution == 0 {
        return Err(domain!("rounding resolution must be positive"));
    }
    let x = h.cutoff as f64;
    if !(log_bound > 0.0 && log_bound <= ln(x)) {
        return Err(domain!("log bound {log_bound} is not a lower bound on log {x}"));
    }
    let (x2, x2_err) = u128_to_f64_err(h.cutoff as u128 * h.cutoff as u128);
    if x2 < bound.threshold() {
        return Err(domain!(
            "cutoff² = {x2:e} is below the {} threshold {:e}",
            bound.name(),
            bound.threshold()
        ));
    }
    let magnitudes = substituted_magnitudes(h, bound)?;
    let res = resolution as f64;
    let mut rounded_terms = Vec::with_capacity(magnitudes.len());
    for (k, mu) in &magnitudes {
        if mu.is_negative() {
            return Err(domain!("magnitude of x²/log^{k} x is negative; a lower log bound does not bound it"));
        }
        let v = to_f64(mu) * x2 / powi(log_bound, *k as i32);
        let err = v * (2.0 * *k as f64 + 6.0) * EPS + to_f64(mu) * x2_err / powi(log_bound, *k as i32);
        let units = ceil((v + err) / res) as u128;
        rounded_terms.push(units * resolution);
    }
    let total = rounded_terms.iter().sum();
    Ok(ConstantLedger {
        magnitudes,
        log_bound,
        resolution,
        rounded_terms,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_coefficients_match_theta() {
        let c = certificate_coefficients(&BoundHypothesis::builtin_lower()).unwrap();
        let (lower, _) = builtin_certificates();
        assert_eq!(c, lower.coeffs);
    }

    #[test]
    fn upper_coefficients_match_omega_except_last() {
        let c = certificate_coefficients(&BoundHypothesis::builtin_upper()).unwrap();
        let (_, upper) = builtin_certificates();
        assert_eq!(c[..7], upper.coeffs[..7]);
        assert_eq!(&upper.coeffs[7] - &c[7], parse_rational("0.4375").unwrap() / int(8));
    }

    #[test]
    fn li_weights() {
        assert_eq!(BoundHypothesis::builtin_lower().li_weight().unwrap(), ratio(7531, 30));
        assert_eq!(BoundHypothesis::builtin_upper().li_weight().unwrap(), ratio(950777, 3150));
    }

    #[test]
    fn validation() {
        let mut h = BoundHypothesis::builtin_upper();
        h.lambda = None;
        assert!(h.validate().is_err());
        let mut h = BoundHypothesis::builtin_lower();
        h.a.pop();
        assert!(h.validate().is_err());
        let mut h = BoundHypothesis::builtin_lower();
        h.m = 1;
        assert!(h.validate().is_err());
        assert_eq!(BoundHypothesis::builtin_upper().li_cutoff_root(), 1_000_000_000);
    }

    #[test]
    fn substituted_magnitudes_for_lower_hypothesis() {
        let mu = substituted_magnitudes(&BoundHypothesis::builtin_lower(), LiBound::Upper1e16).unwrap();
        let want = decimals(&["0.5", "0.75", "1.75", "5.45", "22.725", "115.9375", "1055.578125"]);
        let got: Vec<Rational> = mu.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(got, want);
        assert!(substituted_magnitudes(&BoundHypothesis::builtin_lower(), LiBound::Lower4171).is_err());
    }

    #[test]
    fn reference_bound_at_e() {
        let e = core::f64::consts::E;
        let want = -47.1 + e * e / 2.0 + 3.0 * e * e / 4.0;
        assert!((dusart_reference(e).unwrap() - want).abs() < 1e-12);
        assert!(dusart_reference(1.0).is_err());
    }

    #[test]
    fn log_bound_is_below() {
        let l = log_lower_bound(1_332_450_001, 5);
        assert_eq!(l, 21.01028);
        assert!(l <= ln(1_332_450_001.0));
    }
}
