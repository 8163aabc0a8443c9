//! Number formatting shared by every output format.

use deficit_core::EvaluatedBound;
use serde_json::{json, Value};

/// 17 significant digits, enough to round-trip any f64.
pub fn real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}

pub fn exact(v: impl ToString) -> Value {
    json!({ "value": v.to_string(), "exact": true })
}

pub fn approx(b: EvaluatedBound) -> Value {
    json!({ "value": real(b.value), "absErr": real(b.abs_err) })
}

/// A float whose only error is the final rounding.
pub fn rounded(x: f64) -> Value {
    approx(EvaluatedBound::new(x, f64::EPSILON * x.abs()))
}
