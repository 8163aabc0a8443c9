//! Streaming exact computation of `p_n`, `Σ_{k≤n} p_k`, `C_n` and the step
//! integral `∫₂^{p_n} π(x) dx`.
//!
//! Two exact routes are kept apart on purpose: `C_n` is formed from its
//! definition `n·p_n − Σ p_k`, while the step integral is accumulated as
//! `Σ_{k<n} k·(p_{k+1} − p_k)`. The two must agree for every `n`.
//!
//! Width analysis: with primes below `2^50` ([`crate::sieve::MAX_CAPACITY`])
//! the index stays below `2^50` as well, so `n·p_n < 2^100` and every
//! quantity fits an `i128` with room to spare. The default capacity of 2·10⁹
//! even fits `i64` (`C_n ≲ 10^17`).

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};

use crate::error::{domain, Error, Result};
use crate::sieve::{Primes, Sieve, SieveConfig};

/// One step of the exact stream: index, prime, running sum and `C_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeRecord {
    pub n: u64,
    pub p: u64,
    pub sum: i128,
    pub c: i128,
}

/// Resumable stream state after consuming the first `n` primes.
///
/// `n = 0` is the origin, where every field except `sieve_position` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Checkpoint {
    pub n: u64,
    pub p: u64,
    pub sum: i128,
    pub c: i128,
    /// `∫₂^{p_n} π(x) dx`, accumulated independently of `c`.
    pub step_integral: i128,
    /// First integer not yet handed to the accumulator, always `p + 1`.
    pub sieve_position: u64,
}

impl Checkpoint {
    pub const ORIGIN: Checkpoint = Checkpoint {
        n: 0,
        p: 0,
        sum: 0,
        c: 0,
        step_integral: 0,
        sieve_position: 1,
    };

    /// Structural consistency: the stored `C_n` must match its definition and
    /// the independently accumulated step integral.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::Corrupt(alloc::format!("{why} (n = {})", self.n)));
        if self.sieve_position != self.p + 1 {
            return bad("sieve position does not follow p_n");
        }
        if self.n == 0 {
            if *self != Self::ORIGIN {
                return bad("origin checkpoint carries nonzero state");
            }
            return Ok(());
        }
        if self.p < 2 || self.n > self.p {
            return bad("p_n is not a plausible n-th prime");
        }
        if self.sum < self.p as i128 || self.sum > self.n as i128 * self.p as i128 {
            return bad("running sum out of range");
        }
        if self.c != self.n as i128 * self.p as i128 - self.sum {
            return bad("C_n differs from n·p_n − sum");
        }
        if self.c != self.step_integral {
            return bad("step integral differs from C_n");
        }
        Ok(())
    }

    pub fn record(&self) -> Option<PrimeRecord> {
        (self.n > 0).then_some(PrimeRecord {
            n: self.n,
            p: self.p,
            sum: self.sum,
            c: self.c,
        })
    }
}

/// Integer types usable as exact accumulators.
pub trait AccumInt:
    Copy + Zero + CheckedAdd + CheckedSub + CheckedMul + TryFrom<u64> + TryFrom<i128> + Into<i128>
{
}

impl<T> AccumInt for T where
    T: Copy + Zero + CheckedAdd + CheckedSub + CheckedMul + TryFrom<u64> + TryFrom<i128> + Into<i128>
{
}

/// Consumes primes in ascending order and maintains the exact sums.
///
/// Every operation is checked; exceeding the width of `W` is a hard
/// [`Error::Overflow`], never a wrapped value.
#[derive(Debug, Clone)]
pub struct Accumulator<W: AccumInt = i128> {
    n: u64,
    p: u64,
    sum: W,
    integral: W,
}

impl<W: AccumInt> Default for Accumulator<W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<W: AccumInt> Accumulator<W> {
    pub fn new() -> Self {
        Self {
            n: 0,
            p: 0,
            sum: W::zero(),
            integral: W::zero(),
        }
    }

    pub fn resume(cp: &Checkpoint) -> Result<Self> {
        cp.validate()?;
        let overflow = Error::Overflow { n: cp.n };
        Ok(Self {
            n: cp.n,
            p: cp.p,
            sum: W::try_from(cp.sum).map_err(|_| overflow.clone())?,
            integral: W::try_from(cp.step_integral).map_err(|_| overflow)?,
        })
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    /// Feeds the next prime, which must exceed the previous one.
    pub fn push(&mut self, p: u64) -> Result<PrimeRecord> {
        if p <= self.p {
            return Err(domain!("primes must arrive ascending: {p} after {}", self.p));
        }
        let n = self.n + 1;
        let overflow = || Error::Overflow { n };
        let wide = |v: u64| W::try_from(v).map_err(|_| overflow());

        let sum = self.sum.checked_add(&wide(p)?).ok_or_else(overflow)?;
        let c = wide(n)?
            .checked_mul(&wide(p)?)
            .and_then(|np| np.checked_sub(&sum))
            .ok_or_else(overflow)?;
        let integral = if self.n == 0 {
            self.integral
        } else {
            wide(self.n)?
                .checked_mul(&wide(p - self.p)?)
                .and_then(|step| self.integral.checked_add(&step))
                .ok_or_else(overflow)?
        };

        self.n = n;
        self.p = p;
        self.sum = sum;
        self.integral = integral;
        Ok(PrimeRecord {
            n,
            p,
            sum: sum.into(),
            c: c.into(),
        })
    }

    pub fn step_integral(&self) -> i128 {
        self.integral.into()
    }

    pub fn checkpoint(&self) -> Checkpoint {
        let sum: i128 = self.sum.into();
        Checkpoint {
            n: self.n,
            p: self.p,
            sum,
            c: self.n as i128 * self.p as i128 - sum,
            step_integral: self.integral.into(),
            sieve_position: self.p + 1,
        }
    }
}

/// Turns an ascending prime source into a stream of [`PrimeRecord`]s.
pub struct RecordStream<I> {
    primes: I,
    acc: Accumulator,
    failed: bool,
}

impl<I: Iterator<Item = u64>> RecordStream<I> {
    /// `primes` must yield exactly the primes after `acc`'s last prime.
    pub fn new(primes: I, acc: Accumulator) -> Self {
        Self {
            primes,
            acc,
            failed: false,
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        self.acc.checkpoint()
    }
}

impl<I: Iterator<Item = u64>> Iterator for RecordStream<I> {
    type Item = Result<PrimeRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let p = self.primes.next()?;
        let rec = self.acc.push(p);
        self.failed = rec.is_err();
        Some(rec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSummary {
    pub first: PrimeRecord,
    pub last: PrimeRecord,
    pub emitted: u64,
    /// State after the last emitted record.
    pub checkpoint: Checkpoint,
}

/// Exact prime queries backed by a segmented sieve of fixed capacity.
#[derive(Debug, Clone)]
pub struct PrimeEngine {
    sieve: Sieve,
}

impl PrimeEngine {
    pub fn new(config: SieveConfig) -> Result<Self> {
        Ok(Self {
            sieve: Sieve::new(config)?,
        })
    }

    pub fn with_capacity(capacity: u64) -> Result<Self> {
        Self::new(SieveConfig::with_capacity(capacity))
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    pub fn capacity(&self) -> u64 {
        self.sieve.capacity()
    }

    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        self.sieve.nth_prime(n)
    }

    pub fn prime_count(&self, x: u64) -> Result<u64> {
        self.sieve.prime_count(x)
    }

    /// `π(x)` for real `x`, defined as `π(⌊x⌋)`.
    pub fn prime_count_real(&self, x: f64) -> Result<u64> {
        if x.is_nan() || x < 0.0 {
            return Err(domain!("prime_count needs x >= 0, got {x}"));
        }
        if x >= self.capacity() as f64 + 1.0 {
            return Err(Error::Capacity {
                what: "prime_count argument",
                needed: if x >= u64::MAX as f64 { u64::MAX } else { x as u64 },
                capacity: self.capacity(),
            });
        }
        self.sieve.prime_count(x as u64)
    }

    /// Record stream continuing after `from`.
    pub fn stream(&self, from: &Checkpoint) -> Result<RecordStream<Primes<'_>>> {
        let acc = Accumulator::resume(from)?;
        Ok(RecordStream::new(
            self.sieve.primes_from(from.sieve_position),
            acc,
        ))
    }

    /// State after the first `n` primes.
    pub fn advance_to(&self, n: u64) -> Result<Checkpoint> {
        self.advance_from(&Checkpoint::ORIGIN, n)
    }

    pub fn advance_from(&self, from: &Checkpoint, n: u64) -> Result<Checkpoint> {
        if n < from.n {
            return Err(domain!("cannot rewind from n = {} to n = {n}", from.n));
        }
        let mut stream = self.stream(from)?;
        for _ in from.n..n {
            match stream.next() {
                Some(rec) => {
                    rec?;
                }
                None => return Err(self.index_capacity(n)),
            }
        }
        Ok(stream.checkpoint())
    }

    /// Exact `C_n = n·p_n − Σ_{k≤n} p_k`.
    pub fn cn_exact(&self, n: u64) -> Result<i128> {
        if n == 0 {
            return Err(domain!("C_n is defined for n >= 1"));
        }
        Ok(self.advance_to(n)?.c)
    }

    /// Exact `∫₂^{p_n} π(x) dx = Σ_{k=1}^{n−1} k·(p_{k+1} − p_k)`.
    pub fn pi_step_integral(&self, n: u64) -> Result<i128> {
        if n == 0 {
            return Err(domain!("the step integral is indexed by n >= 1"));
        }
        Ok(self.advance_to(n)?.step_integral)
    }

    /// Exact `∫₂^x π(t) dt` for an integer `x`.
    pub fn pi_integral_to(&self, x: u64) -> Result<i128> {
        if x > self.capacity() {
            return Err(Error::Capacity {
                what: "integral upper limit",
                needed: x,
                capacity: self.capacity(),
            });
        }
        let mut acc = Accumulator::<i128>::new();
        for p in self.sieve.primes_from(2).take_while(|&p| p <= x) {
            acc.push(p)?;
        }
        // π is flat at n on [p_n, x]
        let cp = acc.checkpoint();
        Ok(cp.step_integral + cp.n as i128 * (x - cp.p) as i128)
    }

    /// Emits the records for every `n` in `[n_from, n_to]`, optionally
    /// resuming from a checkpoint at or before `n_from`.
    pub fn cn_stream<F: FnMut(&PrimeRecord)>(
        &self,
        n_from: u64,
        n_to: u64,
        resume: Option<&Checkpoint>,
        mut emit: F,
    ) -> Result<StreamSummary> {
        if n_from == 0 || n_from > n_to {
            return Err(domain!("need 1 <= n_from <= n_to, got [{n_from}, {n_to}]"));
        }
        let start = resume.copied().unwrap_or(Checkpoint::ORIGIN);
        start.validate()?;
        if start.n > n_from {
            return Err(domain!(
                "checkpoint at n = {} is past n_from = {n_from}",
                start.n
            ));
        }
        let mut first = None;
        let mut last = None;
        let mut emitted = 0;
        let mut on = |rec: PrimeRecord| {
            if first.is_none() {
                first = Some(rec);
            }
            last = Some(rec);
            emitted += 1;
            emit(&rec);
        };
        if start.n == n_from {
            if let Some(rec) = start.record() {
                on(rec);
            }
        }
        let mut stream = self.stream(&start)?;
        while stream.acc.count() < n_to {
            let rec = match stream.next() {
                Some(rec) => rec?,
                None => return Err(self.index_capacity(n_to)),
            };
            if rec.n >= n_from {
                on(rec);
            }
        }
        let (Some(first), Some(last)) = (first, last) else {
            unreachable!("non-empty range always emits");
        };
        Ok(StreamSummary {
            first,
            last,
            emitted,
            checkpoint: stream.checkpoint(),
        })
    }

    fn index_capacity(&self, n: u64) -> Error {
        Error::Capacity {
            what: "prime index",
            needed: n,
            capacity: self.capacity(),
        }
    }
}
