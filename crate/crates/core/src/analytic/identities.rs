//! Integration identities for `∫ x/log^k x dx`, checked by evaluating both
//! sides independently: the integral side by quadrature, the closed side
//! from `li` and boundary terms.

use alloc::vec::Vec;

use super::quad::{integrate, QuadConfig};
use super::{li, EvaluatedBound};
use crate::coeffs::{factorial, pow2, t_coeff, to_f64, Rational};
use crate::error::{domain, Result};
use crate::fmath::{ln, powi, EPS};

#[derive(Debug, Clone, PartialEq)]
pub enum Identity {
    /// `∫_a^x t/log t dt = li(x²) − li(a²)`
    LiDifference { a: f64, x: f64 },
    /// `∫_a^x t/log² t dt = 2li(x²) − 2li(a²) − x²/log x + a²/log a`
    LiDifferenceSquared { a: f64, x: f64 },
    /// Integration by parts, `n ≥ 1`:
    /// `∫_r^s x/log^{n+1} x = r²/(n log^n r) − s²/(n log^n s) + (2/n)∫_r^s x/log^n x`
    PartsStep { n: u32, r: f64, s: f64 },
    /// Reduction to the square power, `m ≥ 2`:
    /// `∫_r^s x/log^m x = 2^{m−2}/(m−1)! ∫_r^s x/log² x − Σ_{k=2}^{m−1} 2^{m−1−k}(k−1)!/(m−1)! [x²/log^k x]_r^s`
    ReduceToSquare { m: u32, r: f64, s: f64 },
    /// `Σ_{k=2}^{m} a_k ∫_r^s x/log^k x = t_{m−1,1} ∫_r^s x/log² x − Σ_{k=2}^{m−1} t_{m−1,k} [x²/log^k x]_r^s`
    /// with `a = [a₂, …, a_m]`.
    Combination { a: Vec<Rational>, r: f64, s: f64 },
}

/// Both sides of an identity and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub lhs: EvaluatedBound,
    pub rhs: EvaluatedBound,
    /// `|lhs − rhs|`
    pub residual: f64,
    /// Combined error bound of both sides; a residual above it is a bug.
    pub tolerance: f64,
}

const TIGHT: QuadConfig = QuadConfig {
    abs_tol: 0.0,
    rel_tol: 1e-13,
    max_panels: 4000,
};

fn power_integral(k: u32, r: f64, s: f64) -> Result<EvaluatedBound> {
    integrate(|x| x / powi(ln(x), k as i32), r, s, TIGHT)
}

/// `[x²/log^k x]_r^s`
fn boundary(k: u32, r: f64, s: f64) -> EvaluatedBound {
    let at = |x: f64| {
        let v = x * x / powi(ln(x), k as i32);
        EvaluatedBound::new(v, v.abs() * (k as f64 + 4.0) * EPS)
    };
    at(s) - at(r)
}

fn check_bounds(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 1.0 && hi >= lo && hi.is_finite()) {
        return Err(domain!("identities need upper >= lower > 1, got [{lo}, {hi}]"));
    }
    Ok(())
}

pub fn quadrature_identity_residual(identity: &Identity) -> Result<IdentityResidual> {
    let (lhs, rhs) = match identity {
        Identity::LiDifference { a, x } => {
            check_bounds(*a, *x)?;
            let lhs = integrate(|t| t / ln(t), *a, *x, TIGHT)?;
            let rhs = li(x * x, 1e-13)? - li(a * a, 1e-13)?;
            (lhs, rhs)
        }
        Identity::LiDifferenceSquared { a, x } => {
            check_bounds(*a, *x)?;
            let lhs = power_integral(2, *a, *x)?;
            let rhs = (li(x * x, 1e-13)? - li(a * a, 1e-13)?).scale(2.0) - boundary(1, *a, *x);
            (lhs, rhs)
        }
        Identity::PartsStep { n, r, s } => {
            check_bounds(*r, *s)?;
            if *n == 0 {
                return Err(domain!("integration by parts step needs n >= 1"));
            }
            let nf = *n as f64;
            let lhs = power_integral(n + 1, *r, *s)?;
            let rhs = power_integral(*n, *r, *s)?.scale(2.0 / nf) - boundary(*n, *r, *s).scale(1.0 / nf);
            (lhs, rhs)
        }
        Identity::ReduceToSquare { m, r, s } => {
            check_bounds(*r, *s)?;
            if *m < 2 {
                return Err(domain!("reduction needs m >= 2"));
            }
            let lhs = power_integral(*m, *r, *s)?;
            let lead = to_f64(&Rational::new(pow2(m - 2), factorial(m - 1)));
            let mut rhs = power_integral(2, *r, *s)?.scale(lead);
            for k in 2..*m {
                let w = to_f64(&Rational::new(pow2(m - 1 - k) * factorial(k - 1), factorial(m - 1)));
                rhs = rhs - boundary(k, *r, *s).scale(w);
            }
            (lhs, rhs)
        }
        Identity::Combination { a, r, s } => {
            check_bounds(*r, *s)?;
            if a.is_empty() {
                return Err(domain!("combination needs a_2..a_m with m >= 2"));
            }
            let m = a.len() as u32 + 1;
            let mut lhs = EvaluatedBound::exact(0.0);
            for (idx, ak) in a.iter().enumerate() {
                lhs = lhs + power_integral(idx as u32 + 2, *r, *s)?.scale(to_f64(ak));
            }
            let mut rhs = power_integral(2, *r, *s)?.scale(to_f64(&t_coeff(a, m - 1, 1)?));
            for k in 2..m {
                rhs = rhs - boundary(k, *r, *s).scale(to_f64(&t_coeff(a, m - 1, k)?));
            }
            (lhs, rhs)
        }
    };
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs.value - rhs.value).abs(),
        tolerance: lhs.abs_err + rhs.abs_err + 4.0 * EPS * lhs.value.abs().max(rhs.value.abs()),
    })
}
