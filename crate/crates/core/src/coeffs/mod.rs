//! Exact rational algebra: the `b_{s,i,j,r}` recurrence, the `t_{i,j}`
//! transform, the factorial coefficients of the `p_n²` expansion, and the
//! polynomials `U_s` in `log log n`.

mod ais;
mod b;
mod expansion;
mod poly;
mod transform;

use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use ais::AisTable;
pub use b::{b_coeff, BTable};
pub use expansion::{
    h_m_expansion, li_expansion, prime_asymptotic, prime_count_expansion, thm21_expansion,
    thm29_expansion, AsymptoticExpansion, RemainderOrder, Scale, Term,
};
pub use poly::{u_polynomial, Polynomial};
pub use transform::{t_coeff, thm29_coeff};

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// Parses `"p/q"`, integers and plain decimals such as `"5.65"` or `"1e18"`
/// into an exact rational. Decimals are never routed through floating point.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(alloc::format!("not a rational number: {text:?}"));
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = parse_int(num.trim()).ok_or_else(bad)?;
        let den: BigInt = parse_int(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::Parse(alloc::format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::from(whole);
    all.push_str(frac);
    let mut value = Rational::from_integer(parse_int(&all).ok_or_else(bad)?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

/// Nearest f64 to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("5.65").unwrap(), ratio(113, 20));
        assert_eq!(parse_rational("-47.1").unwrap(), ratio(-471, 10));
        assert_eq!(parse_rational("4942.21875").unwrap(), ratio(158151, 32));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert_eq!(parse_rational("1e18").unwrap(), int(1_000_000_000_000_000_000));
        assert_eq!(parse_rational("2.5e-1").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("950777/3150").unwrap(), ratio(950777, 3150));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "-", ".", "1/0", "abc", "1.2.3", "3/x", "1e", "--1"] {
            assert!(parse_rational(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn canonical_form() {
        let r = parse_rational("10/-4").unwrap();
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
