use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{factorial, int, pow2, ratio, thm29_coeff, AisTable, BTable, Polynomial, Rational};
use crate::error::{domain, Result};

/// Common factor multiplying every term of an expansion in the variable `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    /// 1
    Unit,
    /// `x` (`n` for the expansion of `p_n`, `x` for `π(x)` and `li(x)`)
    Linear,
    /// `x²/2` (`n²/2` for `C_n` in terms of `n`)
    HalfSquare,
    /// `x²` (`p_n²` for `C_n` in terms of `p_n`)
    Square,
}

impl Scale {
    pub fn factor(self, x: f64) -> f64 {
        match self {
            Scale::Unit => 1.0,
            Scale::Linear => x,
            Scale::HalfSquare => x * x / 2.0,
            Scale::Square => x * x,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Unit => "1",
            Scale::Linear => "x",
            Scale::HalfSquare => "x^2/2",
            Scale::Square => "x^2",
        })
    }
}

/// Order of the discarded tail, relative to nothing: the `O`-term is
/// `scale(x)` times the stated factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemainderOrder {
    /// Finite sum, nothing discarded.
    Exact,
    /// `O(1/log^order x)`
    InvLog { order: u32 },
    /// `O((log log x)^order / log^order x)`
    LogLogOverLog { order: u32 },
}

impl fmt::Display for RemainderOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RemainderOrder::Exact => f.write_str("exact"),
            RemainderOrder::InvLog { order } => write!(f, "O(1/log^{order} x)"),
            RemainderOrder::LogLogOverLog { order } => {
                write!(f, "O((log log x)^{order}/log^{order} x)")
            }
        }
    }
}

/// `coeff · (log x)^{−inv_log_power} · (log log x)^{loglog_power}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub inv_log_power: i32,
    pub loglog_power: u32,
}

/// `scale(x) · Σ terms + remainder`, with exact rational coefficients and at
/// most one term per `(inv_log_power, loglog_power)` key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticExpansion {
    scale: Scale,
    terms: BTreeMap<(i32, u32), Rational>,
    remainder: RemainderOrder,
}

impl AsymptoticExpansion {
    pub fn new(scale: Scale, remainder: RemainderOrder) -> Self {
        Self {
            scale,
            terms: BTreeMap::new(),
            remainder,
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn remainder(&self) -> RemainderOrder {
        self.remainder
    }

    /// Adds `coeff` to the term with the given key; zero terms are dropped.
    pub fn add(&mut self, coeff: Rational, inv_log_power: i32, loglog_power: u32) {
        let key = (inv_log_power, loglog_power);
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&(inv_log_power, loglog_power), c)| Term {
            coeff: c.clone(),
            inv_log_power,
            loglog_power,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, inv_log_power: i32, loglog_power: u32) -> Rational {
        self.terms
            .get(&(inv_log_power, loglog_power))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn has_loglog(&self) -> bool {
        self.terms.keys().any(|&(_, ll)| ll > 0)
    }

    /// All terms with the given power of `1/log x`, as a polynomial in
    /// `log log x`.
    pub fn group(&self, inv_log_power: i32) -> Polynomial {
        let mut coeffs = Vec::new();
        for (&(k, ll), c) in &self.terms {
            if k == inv_log_power {
                if coeffs.len() <= ll as usize {
                    coeffs.resize(ll as usize + 1, Rational::zero());
                }
                coeffs[ll as usize] = c.clone();
            }
        }
        Polynomial::new(coeffs)
    }

    /// Drops every term with `inv_log_power > max`.
    pub fn truncate(&mut self, max: i32) {
        self.terms.retain(|&(k, _), _| k <= max);
    }

    /// Term-wise sum of two expansions with the same scale.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.scale != other.scale {
            return Err(domain!("cannot add expansions with scales {} and {}", self.scale, other.scale));
        }
        let mut out = self.clone();
        for t in other.terms() {
            out.add(t.coeff, t.inv_log_power, t.loglog_power);
        }
        Ok(out)
    }
}

impl fmt::Display for AsymptoticExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * (", self.scale)?;
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (idx, t) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", t.coeff)?;
            match t.inv_log_power {
                0 => {}
                -1 => f.write_str("*log x")?,
                k if k < 0 => write!(f, "*log^{} x", -k)?,
                1 => f.write_str("/log x")?,
                k => write!(f, "/log^{k} x")?,
            }
            match t.loglog_power {
                0 => {}
                1 => f.write_str("*loglog x")?,
                k => write!(f, "*loglog^{k} x")?,
            }
        }
        write!(f, ") + {}", self.remainder)
    }
}

/// `p_n = n(log n + log log n − 1 + Σ_{s≤m} (−1)^{s+1}/(s log^s n) Σ_i a_{is}(log log n)^i)`
/// up to `O(n (log log n)^{m+1}/log^{m+1} n)`.
pub fn prime_asymptotic(a: &AisTable) -> AsymptoticExpansion {
    let m = a.m();
    let mut e = AsymptoticExpansion::new(Scale::Linear, RemainderOrder::LogLogOverLog { order: m + 1 });
    e.add(int(1), -1, 0);
    e.add(int(1), 0, 1);
    e.add(int(-1), 0, 0);
    for s in 1..=m {
        let outer = alternating(s) / int(s as i64);
        for i in 0..=s {
            e.add(&outer * a.get(i, s), s as i32, i);
        }
    }
    e
}

/// `h_m = Σ_{j=1}^{m} (j−1)!/(2^j log^j)`.
pub fn h_m_expansion(m: u32) -> Result<AsymptoticExpansion> {
    if m == 0 {
        return Err(domain!("h_m needs m >= 1"));
    }
    let mut e = AsymptoticExpansion::new(Scale::Unit, RemainderOrder::Exact);
    for j in 1..=m {
        e.add(Rational::new(factorial(j - 1), pow2(j)), j as i32, 0);
    }
    Ok(e)
}

/// `Σ_{k=1}^{m} (k−1)! x/log^k x + O(x/log^{m+1} x)`, shared by `li(x)` and `π(x)`.
pub fn li_expansion(m: u32) -> Result<AsymptoticExpansion> {
    if m == 0 {
        return Err(domain!("li expansion needs m >= 1"));
    }
    let mut e = AsymptoticExpansion::new(Scale::Linear, RemainderOrder::InvLog { order: m + 1 });
    for k in 1..=m {
        e.add(Rational::from_integer(factorial(k - 1)), k as i32, 0);
    }
    Ok(e)
}

/// Same main terms as [`li_expansion`]; `π(x)` and `li(x)` share them.
pub fn prime_count_expansion(m: u32) -> Result<AsymptoticExpansion> {
    li_expansion(m)
}

/// `C_n = Σ_{k=1}^{m−1} (k−1)!(1 − 2^{−k}) p_n²/log^k p_n + O(p_n²/log^m p_n)`.
pub fn thm29_expansion(m: u32) -> Result<AsymptoticExpansion> {
    if m == 0 {
        return Err(domain!("expansion order m must be >= 1"));
    }
    let mut e = AsymptoticExpansion::new(Scale::Square, RemainderOrder::InvLog { order: m });
    for k in 1..m {
        e.add(thm29_coeff(k)?, k as i32, 0);
    }
    Ok(e)
}

/// `C_n / (n²/2)` in powers of `1/log n` and `log log n`, through order `m`:
///
/// `log n + log log n − 1/2 + h_m(n)
///   + Σ_{s=1}^{m} (−1)^{s+1}/(s log^s n) Σ_{i=0}^{s} a_{is}
///     (2 (log log n)^i − Σ_{j=0}^{m−s} Σ_{r=0}^{min(i,j)} b_{s,i,j,r} (log log n)^{i−r}/(2^j log^j n))`
pub fn thm21_expansion(m: u32, a: &AisTable) -> Result<AsymptoticExpansion> {
    if m == 0 {
        return Err(domain!("expansion order m must be >= 1"));
    }
    if m > a.m() {
        return Err(domain!("a_is table has depth {}, expansion needs {m}", a.m()));
    }
    let mut e = AsymptoticExpansion::new(
        Scale::HalfSquare,
        RemainderOrder::LogLogOverLog { order: m + 1 },
    );
    e.add(int(1), -1, 0);
    e.add(int(1), 0, 1);
    e.add(ratio(-1, 2), 0, 0);
    for t in h_m_expansion(m)?.terms() {
        e.add(t.coeff, t.inv_log_power, t.loglog_power);
    }
    let mut b = BTable::new();
    for s in 1..=m {
        let outer = alternating(s) / int(s as i64);
        for i in 0..=s {
            let a_is = a.get(i, s);
            if a_is.is_zero() {
                continue;
            }
            let lead = &outer * a_is;
            e.add(&lead * int(2), s as i32, i);
            for j in 0..=(m - s) {
                let halving = Rational::new(BigInt::one(), pow2(j));
                for r in 0..=i.min(j) {
                    let bv = Rational::from_integer(b.get(s, i, j, r)?);
                    e.add(-(&lead * &halving * bv), (s + j) as i32, i - r);
                }
            }
        }
    }
    e.truncate(m as i32);
    Ok(e)
}

fn alternating(s: u32) -> Rational {
    if s % 2 == 1 {
        int(1)
    } else {
        int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_m_terms() {
        let e = h_m_expansion(2).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(1, 0), ratio(1, 2));
        assert_eq!(e.coeff(2, 0), ratio(1, 4));
        assert_eq!(h_m_expansion(1).unwrap().len(), 1);
        assert!(h_m_expansion(0).is_err());
    }

    #[test]
    fn add_merges_and_drops_zeros() {
        let mut e = AsymptoticExpansion::new(Scale::Unit, RemainderOrder::Exact);
        e.add(int(3), 1, 0);
        e.add(int(-3), 1, 0);
        e.add(ratio(1, 2), 2, 1);
        e.add(ratio(1, 2), 2, 1);
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(2, 1), int(1));
    }

    #[test]
    fn thm29_truncation() {
        let e = thm29_expansion(8).unwrap();
        assert_eq!(e.len(), 7);
        assert_eq!(e.coeff(7, 0), ratio(5715, 8));
        assert!(thm29_expansion(1).unwrap().is_empty());
    }

    #[test]
    fn thm21_leading_terms_and_truncation() {
        let e = thm21_expansion(2, &AisTable::builtin_m2()).unwrap();
        assert_eq!(e.coeff(-1, 0), int(1));
        assert_eq!(e.coeff(0, 1), int(1));
        assert_eq!(e.coeff(0, 0), ratio(-1, 2));
        assert!(e.terms().all(|t| t.inv_log_power <= 2));
        assert_eq!(e.remainder(), RemainderOrder::LogLogOverLog { order: 3 });
        assert!(thm21_expansion(3, &AisTable::builtin_m2()).is_err());
    }

    #[test]
    fn prime_asymptotic_first_order() {
        let e = prime_asymptotic(&AisTable::builtin_m2());
        // (ll − 2)/log for s = 1
        assert_eq!(e.coeff(1, 1), int(1));
        assert_eq!(e.coeff(1, 0), int(-2));
        // −(ll² − 6ll + 11)/(2 log²) for s = 2
        assert_eq!(e.coeff(2, 2), ratio(-1, 2));
        assert_eq!(e.coeff(2, 1), int(3));
        assert_eq!(e.coeff(2, 0), ratio(-11, 2));
    }
}
