//! Report and table output as JSON or CSV.
//!
//! Report CSV columns, in order: `certificate, n_from, n_to, status, passed,
//! failed, indeterminate, out_of_domain, min_margin_n, min_margin_p,
//! min_margin, min_margin_abs_err, seconds`.

use std::io::Write;

use anyhow::{bail, Context, Result};
use deficit_core::verify::{AsymptoticRow, CorollaryRow, Margin, SpotCheck, Status};
use deficit_core::VerificationReport;
use serde_json::{json, Value};

use crate::files::FORMAT_VERSION;
use crate::num::{approx, exact, real, rounded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy)]
pub struct RunInfo {
    pub seconds: f64,
    pub workers: usize,
    /// Unix seconds; omitted for reproducible output.
    pub timestamp: Option<u64>,
}

fn margin_json(m: &Margin) -> Value {
    json!({
        "n": m.n,
        "p": m.p,
        "margin": { "value": real(m.value), "absErr": real(m.abs_err) },
    })
}

pub fn report_json(r: &VerificationReport, info: &RunInfo) -> Value {
    let mut v = json!({
        "version": FORMAT_VERSION,
        "certificate": r.certificate_id,
        "range": { "from": r.n_from, "to": r.n_to },
        "status": r.status().name(),
        "passed": r.passed,
        "failures": r.failures,
        "indeterminate": r.indeterminate,
        "outOfDomain": r.out_of_domain,
        "minMargin": r.min_margin.as_ref().map(margin_json),
        "runtime": { "seconds": real(info.seconds), "workers": info.workers },
    });
    if let Some(t) = info.timestamp {
        v["timestamp"] = json!(t);
    }
    v
}

/// Inverse of [`report_json`] for the verification fields.
pub fn report_from_json(v: &Value) -> Result<VerificationReport> {
    if v["version"] != json!(FORMAT_VERSION) {
        bail!("unsupported report version {}", v["version"]);
    }
    let u = |x: &Value, name: &str| x.as_u64().with_context(|| format!("report field {name} missing"));
    let list = |x: &Value, name: &str| -> Result<Vec<u64>> {
        x.as_array()
            .with_context(|| format!("report field {name} missing"))?
            .iter()
            .map(|e| u(e, name))
            .collect()
    };
    let min_margin = match &v["minMargin"] {
        Value::Null => None,
        m => {
            let f = |x: &Value| -> Result<f64> {
                x.as_str().context("margin is not a string")?.parse().context("margin is not a number")
            };
            Some(Margin {
                n: u(&m["n"], "minMargin.n")?,
                p: u(&m["p"], "minMargin.p")?,
                value: f(&m["margin"]["value"])?,
                abs_err: f(&m["margin"]["absErr"])?,
            })
        }
    };
    Ok(VerificationReport {
        certificate_id: v["certificate"].as_str().context("report certificate missing")?.into(),
        n_from: u(&v["range"]["from"], "range.from")?,
        n_to: u(&v["range"]["to"], "range.to")?,
        passed: u(&v["passed"], "passed")?,
        failures: list(&v["failures"], "failures")?,
        indeterminate: list(&v["indeterminate"], "indeterminate")?,
        out_of_domain: u(&v["outOfDomain"], "outOfDomain")?,
        min_margin,
    })
}

pub fn write_report<W: Write>(out: W, r: &VerificationReport, info: &RunInfo, format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(out, &report_json(r, info)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "certificate", "n_from", "n_to", "status", "passed", "failed", "indeterminate",
                "out_of_domain", "min_margin_n", "min_margin_p", "min_margin", "min_margin_abs_err", "seconds",
            ])?;
            let m = r.min_margin;
            w.write_record([
                r.certificate_id.clone(),
                r.n_from.to_string(),
                r.n_to.to_string(),
                r.status().name().into(),
                r.passed.to_string(),
                r.failures.len().to_string(),
                r.indeterminate.len().to_string(),
                r.out_of_domain.to_string(),
                m.map(|m| m.n.to_string()).unwrap_or_default(),
                m.map(|m| m.p.to_string()).unwrap_or_default(),
                m.map(|m| real(m.value)).unwrap_or_default(),
                m.map(|m| real(m.abs_err)).unwrap_or_default(),
                real(info.seconds),
            ])?;
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_json<W: Write>(mut out: W, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Generic table writer: JSON array of objects, or CSV with `header`.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[(Vec<String>, Value)], format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(out, &Value::Array(rows.iter().map(|(_, v)| v.clone()).collect())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for (cells, _) in rows {
                w.write_record(cells)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub const ASYMPTOTIC_HEADER: &[&str] = &["n", "p_n", "c_n", "truncation", "normalized_error"];

pub fn asymptotic_row(r: &AsymptoticRow) -> (Vec<String>, Value) {
    (
        vec![r.n.to_string(), r.p.to_string(), r.c.to_string(), real(r.truncation), real(r.normalized)],
        json!({
            "n": exact(r.n),
            "pN": exact(r.p),
            "cN": exact(r.c),
            "truncation": rounded(r.truncation),
            "normalizedError": rounded(r.normalized),
        }),
    )
}

pub const COROLLARY_HEADER: &[&str] = &[
    "n", "p_n", "prime_sum", "li_p2", "li_p2_abs_err", "pi_p2", "li_normalized", "pi_normalized",
];

pub fn corollary_row(r: &CorollaryRow) -> (Vec<String>, Value) {
    (
        vec![
            r.n.to_string(),
            r.p.to_string(),
            r.sum.to_string(),
            real(r.li_p2.value),
            real(r.li_p2.abs_err),
            r.pi_p2.map(|v| v.to_string()).unwrap_or_default(),
            real(r.li_normalized),
            r.pi_normalized.map(real).unwrap_or_default(),
        ],
        json!({
            "n": exact(r.n),
            "pN": exact(r.p),
            "primeSum": exact(r.sum),
            "liP2": approx(r.li_p2),
            "piP2": r.pi_p2.map(exact),
            "liNormalized": rounded(r.li_normalized),
            "piNormalized": r.pi_normalized.map(rounded),
        }),
    )
}

pub const SPOT_HEADER: &[&str] = &["x", "pi_x", "rhs", "margin", "margin_abs_err", "below_cutoff", "holds"];

pub fn spot_row(s: &SpotCheck) -> (Vec<String>, Value) {
    (
        vec![
            real(s.x),
            s.pi.to_string(),
            real(s.rhs.value),
            real(s.margin.value),
            real(s.margin.abs_err),
            s.below_cutoff.to_string(),
            s.holds().to_string(),
        ],
        json!({
            "x": exact(real(s.x)),
            "pi": exact(s.pi),
            "rhs": approx(s.rhs),
            "margin": approx(s.margin),
            "belowCutoff": s.below_cutoff,
            "holds": s.holds(),
        }),
    )
}

/// Exit status for a finished report.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Verified | Status::OutOfDomain => 0,
        Status::Violated => 1,
        Status::Indeterminate => 3,
    }
}
