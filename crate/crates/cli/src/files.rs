//! Versioned JSON formats for checkpoints, coefficient tables, hypotheses
//! and certificates. Exact integers and rationals travel as strings.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use deficit_core::bounds::Provenance;
use deficit_core::coeffs::parse_rational;
use deficit_core::{AisTable, BoundCertificate, BoundHypothesis, Checkpoint, EvaluatedBound, Rational, Side};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::num::real;

pub const FORMAT_VERSION: u32 = 1;

fn check_version(found: u32, what: &str) -> Result<()> {
    if found != FORMAT_VERSION {
        bail!("unsupported {what} format version {found} (expected {FORMAT_VERSION})");
    }
    Ok(())
}

fn int_field(text: &str, name: &str) -> Result<i128> {
    text.parse().with_context(|| format!("field {name} is not an integer: {text:?}"))
}

fn rational_field(text: &str) -> Result<Rational> {
    Ok(parse_rational(text)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CheckpointFile {
    version: u32,
    n: u64,
    p_n: u64,
    sum: String,
    c_n: String,
    step_integral: String,
    sieve_position: u64,
    sha256: String,
}

fn checkpoint_digest(cp: &Checkpoint) -> String {
    let canonical = format!(
        "deficit-checkpoint/v{FORMAT_VERSION}:{}:{}:{}:{}:{}:{}",
        cp.n, cp.p, cp.sum, cp.c, cp.step_integral, cp.sieve_position
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn checkpoint_to_json(cp: &Checkpoint) -> String {
    let file = CheckpointFile {
        version: FORMAT_VERSION,
        n: cp.n,
        p_n: cp.p,
        sum: cp.sum.to_string(),
        c_n: cp.c.to_string(),
        step_integral: cp.step_integral.to_string(),
        sieve_position: cp.sieve_position,
        sha256: checkpoint_digest(cp),
    };
    serde_json::to_string_pretty(&file).expect("checkpoint serializes")
}

/// Parses and validates a checkpoint; a digest mismatch or an inconsistent
/// state is an error.
pub fn checkpoint_from_json(text: &str) -> Result<Checkpoint> {
    let file: CheckpointFile = serde_json::from_str(text).context("malformed checkpoint")?;
    check_version(file.version, "checkpoint")?;
    let cp = Checkpoint {
        n: file.n,
        p: file.p_n,
        sum: int_field(&file.sum, "sum")?,
        c: int_field(&file.c_n, "cN")?,
        step_integral: int_field(&file.step_integral, "stepIntegral")?,
        sieve_position: file.sieve_position,
    };
    if checkpoint_digest(&cp) != file.sha256 {
        bail!("checkpoint digest mismatch; the file is corrupt or was edited");
    }
    cp.validate()?;
    Ok(cp)
}

/// Writes through a temporary file so an interrupted run keeps the previous
/// checkpoint intact.
pub fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, checkpoint_to_json(cp)).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    checkpoint_from_json(&text).with_context(|| format!("loading {}", path.display()))
}

#[derive(Debug, Serialize, Deserialize)]
struct AisEntry {
    i: u32,
    s: u32,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AisFile {
    version: u32,
    m: u32,
    entries: Vec<AisEntry>,
}

pub fn ais_to_json(a: &AisTable) -> String {
    let file = AisFile {
        version: FORMAT_VERSION,
        m: a.m(),
        entries: a
            .entries()
            .map(|((i, s), v)| AisEntry { i, s, value: v.to_string() })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("table serializes")
}

pub fn ais_from_json(text: &str) -> Result<AisTable> {
    let file: AisFile = serde_json::from_str(text).context("malformed a_is table")?;
    check_version(file.version, "a_is table")?;
    let entries = file
        .entries
        .iter()
        .map(|e| Ok(((e.i, e.s), rational_field(&e.value)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AisTable::new(file.m, entries)?)
}

/// `builtin-m2` or a path to a table file.
pub fn load_ais(spec: &str) -> Result<AisTable> {
    if spec == "builtin-m2" {
        return Ok(AisTable::builtin_m2());
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    ais_from_json(&text).with_context(|| format!("loading {spec}"))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct HypothesisFile {
    #[serde(default = "default_version")]
    version: u32,
    side: String,
    m: u32,
    a: Vec<String>,
    cutoff: u64,
    li_cutoff: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn side_from_name(name: &str) -> Result<Side> {
    match name {
        "lower" => Ok(Side::Lower),
        "upper" => Ok(Side::Upper),
        other => bail!("side must be \"lower\" or \"upper\", got {other:?}"),
    }
}

impl HypothesisFile {
    fn from_hypothesis(h: &BoundHypothesis) -> Self {
        Self {
            version: FORMAT_VERSION,
            side: h.side.name().into(),
            m: h.m,
            a: h.a.iter().map(|v| v.to_string()).collect(),
            cutoff: h.cutoff,
            li_cutoff: serde_json::Value::String(h.li_cutoff.to_string()),
            lambda: h.lambda.as_ref().map(|v| v.to_string()),
        }
    }

    fn into_hypothesis(self) -> Result<BoundHypothesis> {
        check_version(self.version, "hypothesis")?;
        let li_cutoff = match &self.li_cutoff {
            serde_json::Value::String(s) => rational_field(s)?,
            serde_json::Value::Number(n) => rational_field(&n.to_string())?,
            other => bail!("liCutoff must be a number or string, got {other}"),
        };
        let h = BoundHypothesis {
            side: side_from_name(&self.side)?,
            m: self.m,
            a: self.a.iter().map(|s| rational_field(s)).collect::<Result<_>>()?,
            cutoff: self.cutoff,
            li_cutoff,
            lambda: self.lambda.as_deref().map(rational_field).transpose()?,
        };
        h.validate()?;
        Ok(h)
    }
}

pub fn hypothesis_to_json(h: &BoundHypothesis) -> String {
    serde_json::to_string_pretty(&HypothesisFile::from_hypothesis(h)).expect("hypothesis serializes")
}

pub fn hypothesis_from_json(text: &str) -> Result<BoundHypothesis> {
    let file: HypothesisFile = serde_json::from_str(text).context("malformed hypothesis")?;
    file.into_hypothesis()
}

/// `prop53`, `prop56`, or a path to a hypothesis file.
pub fn load_hypothesis(spec: &str) -> Result<BoundHypothesis> {
    match spec {
        "prop53" => Ok(BoundHypothesis::builtin_lower()),
        "prop56" => Ok(BoundHypothesis::builtin_upper()),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            hypothesis_from_json(&text).with_context(|| format!("loading {path}"))
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BoundFile {
    value: String,
    abs_err: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
enum ProvenanceFile {
    Hypothesis(HypothesisFile),
    ClosedForm(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CertificateFile {
    version: u32,
    id: String,
    side: String,
    constant: BoundFile,
    coeffs: Vec<String>,
    n_min: u64,
    provenance: ProvenanceFile,
}

pub fn certificate_to_json(c: &BoundCertificate) -> String {
    let file = CertificateFile {
        version: FORMAT_VERSION,
        id: c.id.clone(),
        side: c.side.name().into(),
        constant: BoundFile {
            value: real(c.constant.value),
            abs_err: real(c.constant.abs_err),
        },
        coeffs: c.coeffs.iter().map(|v| v.to_string()).collect(),
        n_min: c.n_min,
        provenance: match &c.provenance {
            Provenance::Hypothesis(h) => ProvenanceFile::Hypothesis(HypothesisFile::from_hypothesis(h)),
            Provenance::ClosedForm(name) => ProvenanceFile::ClosedForm(name.clone()),
        },
    };
    serde_json::to_string_pretty(&file).expect("certificate serializes")
}

pub fn certificate_from_json(text: &str) -> Result<BoundCertificate> {
    let file: CertificateFile = serde_json::from_str(text).context("malformed certificate")?;
    check_version(file.version, "certificate")?;
    let float = |s: &str, name: &str| -> Result<f64> {
        s.parse().with_context(|| format!("constant.{name} is not a number: {s:?}"))
    };
    Ok(BoundCertificate {
        id: file.id,
        side: side_from_name(&file.side)?,
        constant: EvaluatedBound::new(
            float(&file.constant.value, "value")?,
            float(&file.constant.abs_err, "absErr")?,
        ),
        coeffs: file.coeffs.iter().map(|s| rational_field(s)).collect::<Result<_>>()?,
        n_min: file.n_min,
        provenance: match file.provenance {
            ProvenanceFile::Hypothesis(h) => Provenance::Hypothesis(h.into_hypothesis()?),
            ProvenanceFile::ClosedForm(name) => Provenance::ClosedForm(name),
        },
    })
}

/// `prop53`, `prop56` (the closed forms), or a path to a certificate file.
pub fn load_certificate(spec: &str) -> Result<BoundCertificate> {
    let (lower, upper) = deficit_core::bounds::builtin_certificates();
    match spec {
        "prop53" | "prop53_lower" => Ok(lower),
        "prop56" | "prop56_upper" => Ok(upper),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            certificate_from_json(&text).with_context(|| format!("loading {path}"))
        }
    }
}
