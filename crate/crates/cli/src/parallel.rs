//! Range verification over sieve segments on a thread pool.
//!
//! A first pass counts and sums the primes of every segment; prefix sums
//! then give an exact checkpoint at each segment boundary, so the second
//! pass can check segments independently. Segment reports are merged in
//! order, which makes the result independent of the worker count.

use anyhow::{bail, Result};
use deficit_core::engine::Accumulator;
use deficit_core::verify::{verify_records, Checker};
use deficit_core::{BoundCertificate, Checkpoint, Error, PrimeEngine, VerificationReport};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default)]
struct SegmentTotals {
    count: u64,
    sum: u128,
    last: u64,
}

/// Upper bound on `p_n` (`n(ln n + ln ln n)` for `n ≥ 6`).
fn nth_prime_upper(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

pub fn verify_parallel(
    engine: &PrimeEngine,
    cert: &BoundCertificate,
    n_from: u64,
    n_to: u64,
) -> Result<VerificationReport> {
    if n_from == 0 || n_from > n_to {
        bail!(Error::Domain(format!("need 1 <= n_from <= n_to, got [{n_from}, {n_to}]")));
    }
    let sieve = engine.sieve();
    let span = sieve.span();
    let limit = nth_prime_upper(n_to).min(engine.capacity());
    let segments = limit / span + 1;

    let totals: Vec<SegmentTotals> = (0..segments)
        .into_par_iter()
        .map(|k| {
            let seg = sieve.segment_by_index(k)?;
            Ok(SegmentTotals {
                count: seg.primes.len() as u64,
                sum: seg.primes.iter().map(|&p| p as u128).sum(),
                last: seg.primes.last().copied().unwrap_or(0),
            })
        })
        .collect::<Result<_, Error>>()?;

    // exact state before each segment
    let mut starts = Vec::with_capacity(totals.len());
    let mut state = (0u64, 0u128, 0u64);
    for t in &totals {
        starts.push(state);
        if t.count > 0 {
            state = (state.0 + t.count, state.1 + t.sum, t.last);
        }
    }
    if state.0 < n_to {
        bail!(Error::Capacity { what: "prime index", needed: n_to, capacity: engine.capacity() });
    }

    let wanted: Vec<u64> = (0..segments)
        .filter(|&k| {
            let before = starts[k as usize].0;
            let t = totals[k as usize];
            t.count > 0 && before < n_to && before + t.count >= n_from
        })
        .collect();

    let checker = Checker::new(cert);
    let parts: Vec<VerificationReport> = wanted
        .par_iter()
        .map(|&k| -> Result<VerificationReport> {
            let (n, sum, p) = starts[k as usize];
            let sum = sum as i128;
            let c = n as i128 * p as i128 - sum;
            let cp = if n == 0 {
                Checkpoint::ORIGIN
            } else {
                Checkpoint { n, p, sum, c, step_integral: c, sieve_position: p + 1 }
            };
            let mut acc = Accumulator::<i128>::resume(&cp)?;
            let seg = sieve.segment_by_index(k)?;
            let lo = (n + 1).max(n_from);
            let hi = (n + seg.primes.len() as u64).min(n_to);
            let mut records = Vec::with_capacity((hi + 1 - lo) as usize);
            for &q in &seg.primes {
                let rec = acc.push(q)?;
                if rec.n >= lo && rec.n <= hi {
                    records.push(rec);
                }
            }
            Ok(verify_records(&checker, lo, hi, records)?)
        })
        .collect::<Result<_>>()?;

    let mut merged: Option<VerificationReport> = None;
    for part in parts {
        merged = Some(match merged {
            None => part,
            Some(m) => m.merge(part)?,
        });
    }
    Ok(merged.expect("range is non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use deficit_core::bounds::builtin_certificates;
    use deficit_core::verify::verify_range;

    #[test]
    fn matches_sequential() {
        let engine = PrimeEngine::new(deficit_core::SieveConfig { capacity: 3_000_000, segment_bytes: 1024 }).unwrap();
        let (lower, upper) = builtin_certificates();
        for (a, b) in [(1, 1), (1, 5000), (777, 123_456), (100_000, 200_000)] {
            for cert in [&lower, &upper] {
                let seq = verify_range(&engine, cert, a, b).unwrap();
                assert_eq!(verify_parallel(&engine, cert, a, b).unwrap(), seq, "[{a}, {b}]");
            }
        }
    }

    #[test]
    fn prime_bound_is_above() {
        let engine = PrimeEngine::with_capacity(2_000_000).unwrap();
        for n in [1, 5, 6, 100, 1000, 100_000] {
            assert!(nth_prime_upper(n) >= engine.nth_prime(n).unwrap());
        }
    }
}
