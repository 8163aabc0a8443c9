use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::{int, thm21_expansion, to_f64, AisTable, Rational};
use crate::error::{domain, Result};

/// Polynomial with rational coefficients in ascending degree; the leading
/// coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }
}

impl fmt::Display for Polynomial {
    /// Writes e.g. `x^2 - 5x + 15/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if deg == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            if deg == 1 {
                f.write_str("x")?;
            } else {
                write!(f, "x^{deg}")?;
            }
        }
        Ok(())
    }
}

/// `U_s`: the polynomial in `log log n` such that the `1/log^s n` group of
/// the `C_n/(n²/2)` expansion equals `(−1)^{s+1} U_s(log log n)/(s log^s n)`.
pub fn u_polynomial(s: u32, a: &AisTable) -> Result<Polynomial> {
    if s == 0 {
        return Err(domain!("U_s is defined for s >= 1"));
    }
    if s > a.m() {
        return Err(domain!("U_{s} needs a_is through s = {s}, table stops at {}", a.m()));
    }
    let e = thm21_expansion(s, a)?;
    let sign = if s % 2 == 1 { 1 } else { -1 };
    Ok(e.group(s as i32).scaled(&int(sign * s as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::ratio;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn reference_polynomials() {
        let a = AisTable::builtin_m2();
        let u1 = u_polynomial(1, &a).unwrap();
        let u2 = u_polynomial(2, &a).unwrap();
        assert_eq!(u1.coeffs(), &[ratio(-3, 2), int(1)]);
        assert_eq!(u2.coeffs(), &[ratio(15, 2), int(-5), int(1)]);
        assert_eq!(u1.to_string(), "x - 3/2");
        assert_eq!(u2.to_string(), "x^2 - 5x + 15/2");
        assert!(u_polynomial(3, &a).is_err());
        assert!(u_polynomial(0, &a).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Polynomial::new(vec![]).to_string(), "0");
        assert_eq!(Polynomial::new(vec![int(0), ratio(-3, 2)]).to_string(), "-(3/2)x");
        assert_eq!(Polynomial::new(vec![int(2), int(0), int(0)]).to_string(), "2");
        assert_eq!(Polynomial::new(vec![int(-1), int(0), int(3)]).to_string(), "3x^2 - 1");
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::new(vec![ratio(15, 2), int(-5), int(1)]);
        assert_eq!(p.eval(&int(2)), ratio(3, 2));
        assert!((p.eval_f64(2.0) - 1.5).abs() < 1e-15);
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_monic());
    }
}
