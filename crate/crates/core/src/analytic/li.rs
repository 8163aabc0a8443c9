//! The logarithmic integral `li(x) = pv ∫₀^x dt/log t`.
//!
//! Computed as `li(2) + ∫_{log 2}^{log x} e^u/u du`; the substitution keeps
//! the quadrature interval short even for `x` near `10^19`.

use super::quad::{integrate, QuadConfig};
use super::{log_series, EvaluatedBound};
use crate::coeffs::int;
use crate::error::{domain, Error, Result};
use crate::fmath::{exp, ln, EPS};

/// `li(2)`, to double precision.
#[allow(clippy::excessive_precision)]
pub const LI_2: f64 = 1.045_163_780_117_492_784_844_588_889_194_613_136_522_615_578_151;

pub const DEFAULT_LI_REL_TOL: f64 = 1e-13;

const LN_2: f64 = core::f64::consts::LN_2;

/// `li(x)` with `abs_err ≤ rel_tol · |li(x)|`.
///
/// Requires `x > 1` and `0 < rel_tol ≤ 10⁻⁶`. Close to the root of `li`
/// near 1.451 no relative tolerance is reachable and a precision error is
/// returned.
pub fn li(x: f64, rel_tol: f64) -> Result<EvaluatedBound> {
    if x.is_nan() || x <= 1.0 {
        return Err(domain!("li(x) needs x > 1, got {x}"));
    }
    if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
        return Err(domain!("li tolerance must be in (0, 1e-6], got {rel_tol}"));
    }
    if !x.is_finite() {
        return Err(domain!("li(x) needs finite x"));
    }
    let head = EvaluatedBound::new(LI_2, EPS * LI_2);
    if x == 2.0 {
        return Ok(head);
    }
    let lx = ln(x);
    let cfg = QuadConfig::relative(rel_tol / 8.0);
    let body = integrate(|u| exp(u) / u, LN_2, lx, cfg)?;
    // log x carries up to one rounding; li' = 1/log t turns that into x·ε
    let limit_err = 2.0 * EPS * x;
    let r = head + EvaluatedBound::new(body.value, body.abs_err + limit_err);
    if r.abs_err > rel_tol * r.value.abs() {
        return Err(Error::Precision(alloc::format!(
            "li({x}) = {} with error {:e} misses relative tolerance {rel_tol:e}",
            r.value,
            r.abs_err
        )));
    }
    Ok(r)
}

/// Explicit inequalities between `li(x)` and its truncated asymptotic series,
/// each valid on `x ≥ threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiBound {
    /// `li(x) ≥ Σ_{k=1}^{8} (k−1)! x/log^k x` for `x ≥ 4171`.
    Lower4171,
    /// `li(x) ≤ Σ_{k=1}^{6} (k−1)! x/log^k x + 900x/log^7 x` for `x ≥ 10¹⁶`.
    Upper1e16,
    /// `li(x) ≤ Σ_{k=1}^{7} (k−1)! x/log^k x + 6300x/log^8 x` for `x ≥ 10¹⁸`.
    Upper1e18,
}

impl LiBound {
    pub const ALL: [LiBound; 3] = [LiBound::Lower4171, LiBound::Upper1e16, LiBound::Upper1e18];

    pub fn threshold(self) -> f64 {
        match self {
            LiBound::Lower4171 => 4171.0,
            LiBound::Upper1e16 => 1e16,
            LiBound::Upper1e18 => 1e18,
        }
    }

    pub fn is_upper(self) -> bool {
        !matches!(self, LiBound::Lower4171)
    }

    /// Coefficients `c_k` of `x/log^k x`, `k = 1, 2, …`.
    pub fn coefficients(self) -> &'static [i64] {
        match self {
            LiBound::Lower4171 => &[1, 1, 2, 6, 24, 120, 720, 5040],
            LiBound::Upper1e16 => &[1, 1, 2, 6, 24, 120, 900],
            LiBound::Upper1e18 => &[1, 1, 2, 6, 24, 120, 720, 6300],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LiBound::Lower4171 => "lower-4171",
            LiBound::Upper1e16 => "upper-1e16",
            LiBound::Upper1e18 => "upper-1e18",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// The series side of the inequality at `x`.
    pub fn series(self, x: f64) -> Result<EvaluatedBound> {
        let coeffs: alloc::vec::Vec<_> = self
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as u32 + 1, int(c)))
            .collect();
        log_series(&coeffs, x, x, 0.0)
    }
}

/// Signed margin of an explicit `li` inequality at `x`: `li(x) − series(x)`
/// for the lower bound, `series(x) − li(x)` for the upper ones. A margin
/// whose whole interval is nonnegative certifies the inequality at `x`.
pub fn li_bound_check(which: LiBound, x: f64) -> Result<EvaluatedBound> {
    if x.is_nan() || x < which.threshold() {
        return Err(domain!(
            "{} holds for x >= {}, got {x}",
            which.name(),
            which.threshold()
        ));
    }
    let l = li(x, 1e-13)?;
    let s = which.series(x)?;
    Ok(if which.is_upper() { s - l } else { l - s })
}
