//! Checks of exact `C_n` against certificates and asymptotic truncations.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::analytic::{eval_expansion, li, EvaluatedBound, LogSeries, DEFAULT_LI_REL_TOL};
use crate::bounds::{BoundCertificate, BoundHypothesis, Side};
use crate::coeffs::{thm29_expansion, Rational};
use crate::engine::{Checkpoint, PrimeEngine, PrimeRecord};
use crate::error::{domain, Result};
use crate::fmath::{ceil, floor, ln, powi, u128_to_f64_err};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The certificate's error interval straddles `C_n`.
    Indeterminate,
    /// `n < nMin`; the certificate claims nothing.
    OutOfDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verified,
    Indeterminate,
    Violated,
    /// Every `n` in the range is below the certificate's threshold.
    OutOfDomain,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Indeterminate => "indeterminate",
            Status::Violated => "violated",
            Status::OutOfDomain => "out-of-domain",
        }
    }
}

/// Signed slack in the direction of the certificate: `C_n − bound` for lower
/// certificates, `bound − C_n` for upper ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub n: u64,
    pub p: u64,
    pub value: f64,
    pub abs_err: f64,
}

impl Margin {
    fn better_min(&self, other: &Margin) -> bool {
        match self.value.total_cmp(&other.value) {
            Ordering::Less => true,
            Ordering::Equal => self.n < other.n,
            Ordering::Greater => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub certificate_id: String,
    pub n_from: u64,
    pub n_to: u64,
    pub passed: u64,
    /// Ascending.
    pub failures: Vec<u64>,
    /// Ascending.
    pub indeterminate: Vec<u64>,
    pub out_of_domain: u64,
    /// Smallest margin over in-domain `n`; ties go to the smaller `n`.
    pub min_margin: Option<Margin>,
}

impl VerificationReport {
    pub fn empty(certificate_id: &str, n_from: u64, n_to: u64) -> Self {
        Self {
            certificate_id: certificate_id.into(),
            n_from,
            n_to,
            passed: 0,
            failures: Vec::new(),
            indeterminate: Vec::new(),
            out_of_domain: 0,
            min_margin: None,
        }
    }

    pub fn status(&self) -> Status {
        if !self.failures.is_empty() {
            Status::Violated
        } else if !self.indeterminate.is_empty() {
            Status::Indeterminate
        } else if self.passed == 0 {
            Status::OutOfDomain
        } else {
            Status::Verified
        }
    }

    /// Number of `n` accounted for.
    pub fn total(&self) -> u64 {
        self.passed + self.failures.len() as u64 + self.indeterminate.len() as u64 + self.out_of_domain
    }

    pub fn record(&mut self, n: u64, verdict: Verdict, margin: Option<Margin>) {
        match verdict {
            Verdict::Pass => self.passed += 1,
            Verdict::Fail => self.failures.push(n),
            Verdict::Indeterminate => self.indeterminate.push(n),
            Verdict::OutOfDomain => self.out_of_domain += 1,
        }
        if let Some(m) = margin {
            if self.min_margin.is_none_or(|cur| m.better_min(&cur)) {
                self.min_margin = Some(m);
            }
        }
    }

    /// Joins the report for the range directly after this one.
    pub fn merge(mut self, next: VerificationReport) -> Result<Self> {
        if self.certificate_id != next.certificate_id {
            return Err(domain!(
                "cannot merge reports for {} and {}",
                self.certificate_id,
                next.certificate_id
            ));
        }
        if next.n_from != self.n_to + 1 {
            return Err(domain!(
                "reports [{}, {}] and [{}, {}] are not adjacent",
                self.n_from,
                self.n_to,
                next.n_from,
                next.n_to
            ));
        }
        self.n_to = next.n_to;
        self.passed += next.passed;
        self.failures.extend(next.failures);
        self.indeterminate.extend(next.indeterminate);
        self.out_of_domain += next.out_of_domain;
        if let Some(m) = next.min_margin {
            if self.min_margin.is_none_or(|cur| m.better_min(&cur)) {
                self.min_margin = Some(m);
            }
        }
        Ok(self)
    }
}

/// A certificate prepared for repeated evaluation at primes.
#[derive(Debug, Clone)]
pub struct Checker {
    id: String,
    side: Side,
    n_min: u64,
    constant: EvaluatedBound,
    series: LogSeries,
}

impl Checker {
    pub fn new(c: &BoundCertificate) -> Self {
        let terms: Vec<(u32, Rational)> = c
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u32 + 1, v.clone()))
            .collect();
        Self {
            id: c.id.clone(),
            side: c.side,
            n_min: c.n_min,
            constant: c.constant,
            series: LogSeries::new(&terms),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Certificate value at the prime `p`, with `p²` formed exactly.
    pub fn bound_at(&self, p: u64) -> Result<EvaluatedBound> {
        let (p2, p2_err) = u128_to_f64_err(p as u128 * p as u128);
        Ok(self.constant + self.series.eval(p as f64, p2, p2_err)?)
    }

    pub fn check(&self, rec: &PrimeRecord) -> Result<(Verdict, Option<Margin>)> {
        if rec.n < self.n_min {
            return Ok((Verdict::OutOfDomain, None));
        }
        let bound = self.bound_at(rec.p)?;
        let c = rec.c;
        // Integer thresholds make the comparison with the exact C_n exact.
        let (verdict, slack) = match self.side {
            Side::Lower => {
                let verdict = if c >= ceil(bound.upper()) as i128 {
                    Verdict::Pass
                } else if c < ceil(bound.lower()) as i128 {
                    Verdict::Fail
                } else {
                    Verdict::Indeterminate
                };
                (verdict, diff(c, bound.value))
            }
            Side::Upper => {
                let verdict = if c <= floor(bound.lower()) as i128 {
                    Verdict::Pass
                } else if c > floor(bound.upper()) as i128 {
                    Verdict::Fail
                } else {
                    Verdict::Indeterminate
                };
                (verdict, -diff(c, bound.value))
            }
        };
        let margin = Margin {
            n: rec.n,
            p: rec.p,
            value: slack,
            abs_err: bound.abs_err,
        };
        Ok((verdict, Some(margin)))
    }
}

/// `c − v` without rounding `c` first.
fn diff(c: i128, v: f64) -> f64 {
    let whole = floor(v);
    (c - whole as i128) as f64 - (v - whole)
}

/// Checks a contiguous run of records; `n_from..=n_to` must match the
/// records supplied.
pub fn verify_records<I>(checker: &Checker, n_from: u64, n_to: u64, records: I) -> Result<VerificationReport>
where
    I: IntoIterator<Item = PrimeRecord>,
{
    let mut report = VerificationReport::empty(checker.id(), n_from, n_to);
    let mut expect = n_from;
    for rec in records {
        if rec.n != expect || rec.n > n_to {
            return Err(domain!("record n = {} out of sequence (expected {expect})", rec.n));
        }
        let (verdict, margin) = checker.check(&rec)?;
        report.record(rec.n, verdict, margin);
        expect += 1;
    }
    if expect != n_to + 1 {
        return Err(domain!("records stopped at n = {} before {n_to}", expect - 1));
    }
    Ok(report)
}

/// Verifies `c` for every `n ∈ [n_from, n_to]`.
pub fn verify_range(
    engine: &PrimeEngine,
    c: &BoundCertificate,
    n_from: u64,
    n_to: u64,
) -> Result<VerificationReport> {
    verify_range_from(engine, c, n_from, n_to, None)
}

/// As [`verify_range`], resuming the prime stream at a checkpoint.
pub fn verify_range_from(
    engine: &PrimeEngine,
    c: &BoundCertificate,
    n_from: u64,
    n_to: u64,
    resume: Option<&Checkpoint>,
) -> Result<VerificationReport> {
    let checker = Checker::new(c);
    let mut report = VerificationReport::empty(&c.id, n_from, n_to);
    let mut failure = None;
    engine.cn_stream(n_from, n_to, resume, |rec| {
        if failure.is_some() {
            return;
        }
        match checker.check(rec) {
            Ok((verdict, margin)) => report.record(rec.n, verdict, margin),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRow {
    pub n: u64,
    pub p: u64,
    pub c: i128,
    pub truncation: f64,
    /// `(C_n − truncation)·log^m p_n / p_n²`
    pub normalized: f64,
}

/// Rows in input order for the order-`m` truncation of `C_n`.
pub fn asymptotic_error_table(engine: &PrimeEngine, m: u32, points: &[u64]) -> Result<Vec<AsymptoticRow>> {
    if m < 2 {
        return Err(domain!("the truncation table needs m >= 2, got {m}"));
    }
    let expansion = thm29_expansion(m)?;
    let records = records_at(engine, points)?;
    records
        .into_iter()
        .map(|rec| {
            if rec.p < 3 {
                return Err(domain!("the table needs p_n >= 3, got n = {}", rec.n));
            }
            let p = rec.p as f64;
            let truncation = eval_expansion(&expansion, p)?;
            let normalized = diff(rec.c, truncation) * powi(ln(p), m as i32) / (p * p);
            Ok(AsymptoticRow {
                n: rec.n,
                p: rec.p,
                c: rec.c,
                truncation,
                normalized,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryRow {
    pub n: u64,
    pub p: u64,
    pub sum: i128,
    pub li_p2: EvaluatedBound,
    /// `π(p_n²)`, when `p_n²` is within the secondary engine's capacity.
    pub pi_p2: Option<u64>,
    /// `(Σp_k − li(p_n²))·log³p_n / p_n²`
    pub li_normalized: f64,
    /// `(Σp_k − π(p_n²))·log³p_n / p_n²`
    pub pi_normalized: Option<f64>,
}

/// Partial prime sums against `li(p_n²)` and, where feasible, `π(p_n²)`.
pub fn corollary_tables(
    engine: &PrimeEngine,
    points: &[u64],
    pi_engine: Option<&PrimeEngine>,
) -> Result<Vec<CorollaryRow>> {
    let records = records_at(engine, points)?;
    records
        .into_iter()
        .map(|rec| {
            let p = rec.p as f64;
            let p2_exact = rec.p as u128 * rec.p as u128;
            let (p2, p2_err) = u128_to_f64_err(p2_exact);
            let l = li(p2, DEFAULT_LI_REL_TOL)?;
            let li_p2 = EvaluatedBound::new(l.value, l.abs_err + p2_err / ln(p2));
            let scale = powi(ln(p), 3) / p2;
            let pi_p2 = match pi_engine {
                Some(e) if p2_exact <= e.capacity() as u128 => Some(e.prime_count(p2_exact as u64)?),
                _ => None,
            };
            Ok(CorollaryRow {
                n: rec.n,
                p: rec.p,
                sum: rec.sum,
                li_p2,
                pi_p2,
                li_normalized: diff(rec.sum, li_p2.value) * scale,
                pi_normalized: pi_p2.map(|v| (rec.sum - v as i128) as f64 * scale),
            })
        })
        .collect()
}

/// Records at each requested `n`, in input order, from one ascending pass.
fn records_at(engine: &PrimeEngine, points: &[u64]) -> Result<Vec<PrimeRecord>> {
    if points.contains(&0) {
        return Err(domain!("prime indices start at 1"));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points[i]);
    let mut out: Vec<Option<PrimeRecord>> = alloc::vec![None; points.len()];
    let mut cp = Checkpoint::ORIGIN;
    for i in order {
        cp = engine.advance_from(&cp, points[i])?;
        out[i] = cp.record();
    }
    Ok(out.into_iter().map(|r| r.expect("n >= 1 has a record")).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotCheck {
    pub x: f64,
    pub pi: u64,
    pub rhs: EvaluatedBound,
    /// `π(x) − rhs` (lower) or `rhs − π(x)` (upper).
    pub margin: EvaluatedBound,
    /// The hypothesis claims nothing below its cutoff.
    pub below_cutoff: bool,
}

impl SpotCheck {
    /// Nonnegative over the whole error interval.
    pub fn holds(&self) -> bool {
        self.margin.lower() >= 0.0
    }
}

/// Samples the hypothesis's `π` inequality with exact `π(x)`.
pub fn hypothesis_spot_check(h: &BoundHypothesis, engine: &PrimeEngine, samples: &[f64]) -> Result<Vec<SpotCheck>> {
    h.validate()?;
    samples
        .iter()
        .map(|&x| {
            if x.is_nan() || x <= 1.0 {
                return Err(domain!("spot checks need x > 1, got {x}"));
            }
            let pi = engine.prime_count_real(x)?;
            let rhs = h.pi_series(x)?;
            let exact = EvaluatedBound::exact(pi as f64);
            let margin = match h.side {
                Side::Lower => exact - rhs,
                Side::Upper => rhs - exact,
            };
            Ok(SpotCheck {
                x,
                pi,
                rhs,
                margin,
                below_cutoff: x < h.cutoff as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{builtin_certificates, Provenance};
    use crate::coeffs::int;

    fn engine() -> PrimeEngine {
        PrimeEngine::with_capacity(2_000_000).unwrap()
    }

    fn zero_cert(side: Side) -> BoundCertificate {
        BoundCertificate {
            id: "zero".into(),
            side,
            constant: EvaluatedBound::exact(0.0),
            coeffs: alloc::vec![int(0)],
            n_min: 1,
            provenance: Provenance::ClosedForm("zero".into()),
        }
    }

    #[test]
    fn zero_lower_certificate_passes_except_at_one() {
        // C_1 = 0 meets a zero bound exactly
        let r = verify_range(&engine(), &zero_cert(Side::Lower), 1, 50).unwrap();
        assert_eq!(r.passed, 50);
        assert_eq!(r.status(), Status::Verified);
        let m = r.min_margin.unwrap();
        assert_eq!((m.n, m.value), (1, 0.0));
    }

    #[test]
    fn zero_upper_certificate_fails_after_one() {
        let r = verify_range(&engine(), &zero_cert(Side::Upper), 1, 20).unwrap();
        assert_eq!(r.passed, 1);
        assert_eq!(r.failures, (2..=20).collect::<Vec<_>>());
        assert_eq!(r.status(), Status::Violated);
    }

    #[test]
    fn below_threshold_is_out_of_domain() {
        let (lower, _) = builtin_certificates();
        let r = verify_range(&engine(), &lower, 100, 200).unwrap();
        assert_eq!(r.out_of_domain, 101);
        assert!(r.failures.is_empty());
        assert_eq!(r.status(), Status::OutOfDomain);
    }

    #[test]
    fn merge_matches_single_run() {
        let (_, upper) = builtin_certificates();
        let e = engine();
        let whole = verify_range(&e, &upper, 1, 3000).unwrap();
        let a = verify_range(&e, &upper, 1, 1234).unwrap();
        let b = verify_range(&e, &upper, 1235, 3000).unwrap();
        assert_eq!(a.merge(b).unwrap(), whole);
        assert_eq!(whole.total(), 3000);
        let c = verify_range(&e, &upper, 1, 10).unwrap();
        let d = verify_range(&e, &upper, 12, 20).unwrap();
        assert!(c.merge(d).is_err());
    }

    #[test]
    fn exact_difference() {
        assert_eq!(diff(10, 2.5), 7.5);
        assert_eq!(diff(1 << 60, (1u64 << 60) as f64 - 0.0), 0.0);
        assert_eq!(diff(-3, -3.25), 0.25);
    }

    #[test]
    fn table_rejects_p_two() {
        assert!(asymptotic_error_table(&engine(), 2, &[1]).is_err());
        assert!(asymptotic_error_table(&engine(), 1, &[10]).is_err());
        let rows = asymptotic_error_table(&engine(), 2, &[1000, 10]).unwrap();
        assert_eq!((rows[0].n, rows[1].n), (1000, 10));
        assert_eq!(rows[0].p, 7919);
    }

    #[test]
    fn corollary_row_at_100() {
        let e = engine();
        let pi = PrimeEngine::with_capacity(300_000).unwrap();
        let rows = corollary_tables(&e, &[100, 1000], Some(&pi)).unwrap();
        assert_eq!(rows[0].sum, 24133);
        assert_eq!(rows[0].p, 541);
        assert!(rows[0].pi_p2.is_some());
        assert!(rows[1].pi_p2.is_none());
    }

    #[test]
    fn spot_check_flags_below_cutoff() {
        let h = BoundHypothesis::builtin_upper();
        let out = hypothesis_spot_check(&h, &engine(), &[10.0, 11.0, 100.0, 1e6]).unwrap();
        assert!(out[0].below_cutoff);
        assert!(out[1..].iter().all(|s| !s.below_cutoff && s.holds()));
    }
}
