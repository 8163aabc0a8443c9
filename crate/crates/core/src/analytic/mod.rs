//! Floating-point evaluation with explicit error bounds: the logarithmic
//! integral, expansion evaluation, the closed-form tails of the explicit
//! bounds, and quadrature checks of the integration identities.

mod eval;
mod identities;
mod li;
pub mod quad;

use core::ops::{Add, Neg, Sub};

use crate::fmath::EPS;

pub use eval::{
    chi, chi_coefficients, eval_expansion, log_series, LogSeries, omega, omega_coefficients, theta,
    theta_coefficients,
};
pub use identities::{quadrature_identity_residual, Identity, IdentityResidual};
pub use li::{li, li_bound_check, LiBound, DEFAULT_LI_REL_TOL, LI_2};

/// A real number known to lie in `[value − abs_err, value + abs_err]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluatedBound {
    pub value: f64,
    pub abs_err: f64,
}

impl EvaluatedBound {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Self {
            value,
            abs_err: abs_err.abs(),
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn lower(&self) -> f64 {
        self.value - self.abs_err
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_err
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err / self.value.abs()
    }

    /// Multiplies by a float that is itself exact.
    pub fn scale(self, k: f64) -> Self {
        let v = self.value * k;
        Self::new(v, self.abs_err * k.abs() + EPS * v.abs())
    }
}

impl Add for EvaluatedBound {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let v = self.value + rhs.value;
        Self::new(v, self.abs_err + rhs.abs_err + EPS * v.abs())
    }
}

impl Sub for EvaluatedBound {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for EvaluatedBound {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_arithmetic_widens() {
        let a = EvaluatedBound::new(1.0, 0.1);
        let b = EvaluatedBound::new(2.0, 0.2);
        let c = a - b;
        assert!(c.contains(-1.0));
        assert!(c.abs_err >= 0.3);
        assert!(a.scale(-2.0).contains(-2.2 + 1e-12));
        assert_eq!(EvaluatedBound::exact(3.0).lower(), 3.0);
    }
}
