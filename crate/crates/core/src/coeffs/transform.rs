use num_bigint::BigInt;
use num_traits::Zero;

use super::{factorial, pow2, Rational};
use crate::error::{domain, Result};

/// `t_{i,j} = (j−1)! Σ_{l=j}^{i} 2^{l−j} a_{l+1} / l!`.
///
/// `a` holds `a₂, …, a_m` (so `a[0] = a₂`), and `i ≤ m − 1` keeps every
/// referenced `a_{l+1}` inside the list. For `i < j` the sum is empty and the
/// result is zero; the certificates rely on this for `t_{0,1}`.
pub fn t_coeff(a: &[Rational], i: u32, j: u32) -> Result<Rational> {
    let m = a.len() as u32 + 1;
    if j == 0 {
        return Err(domain!("t_{{i,j}} needs j >= 1"));
    }
    if i + 1 > m {
        return Err(domain!(
            "t_{{{i},{j}}} needs a_{} but the list stops at a_{m}",
            i + 1
        ));
    }
    let mut acc = Rational::zero();
    for l in j..=i {
        let weight = Rational::new(pow2(l - j), factorial(l));
        acc += weight * &a[(l + 1 - 2) as usize];
    }
    Ok(acc * Rational::from_integer(factorial(j - 1)))
}

/// `(k−1)!·(1 − 2^{−k})`, the coefficient of `p_n²/log^k p_n` in the
/// asymptotic expansion of `C_n`.
pub fn thm29_coeff(k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(domain!("expansion coefficients are indexed from k = 1"));
    }
    let two_k = pow2(k);
    Ok(Rational::new(factorial(k - 1) * (&two_k - BigInt::from(1)), two_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{int, parse_rational, ratio};
    use alloc::vec::Vec;

    fn prop53_a() -> Vec<Rational> {
        ["1", "2", "5.65", "23.65", "118.25", "709.5", "4966.5", "0"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect()
    }

    #[test]
    fn single_summand() {
        let a = [ratio(7, 3), int(5)];
        assert_eq!(t_coeff(&a, 1, 1).unwrap(), ratio(7, 3));
    }

    #[test]
    fn lower_hypothesis_values() {
        let a = prop53_a();
        assert_eq!(t_coeff(&a, 3, 1).unwrap(), ratio(203, 30));
        // 1 + 2 t_{8,1} = 753.1 / 3
        let t81 = t_coeff(&a, 8, 1).unwrap();
        assert_eq!(int(1) + int(2) * t81, ratio(7531, 30));
        assert_eq!(t_coeff(&a, 8, 8).unwrap(), int(0));
    }

    #[test]
    fn zero_list_and_empty_sum() {
        let zeros = [int(0), int(0), int(0)];
        assert_eq!(t_coeff(&zeros, 3, 2).unwrap(), int(0));
        assert_eq!(t_coeff(&prop53_a(), 0, 1).unwrap(), int(0));
    }

    #[test]
    fn index_errors() {
        let a = [int(1), int(2)];
        assert!(t_coeff(&a, 3, 1).is_err());
        assert!(t_coeff(&a, 1, 0).is_err());
    }

    #[test]
    fn thm29_values() {
        let want = [(1, 2), (3, 4), (7, 4), (45, 8), (93, 4), (945, 8), (5715, 8)];
        for (k, (n, d)) in want.iter().enumerate() {
            assert_eq!(thm29_coeff(k as u32 + 1).unwrap(), ratio(*n, *d));
        }
        assert!(thm29_coeff(0).is_err());
    }
}
