//! Odd-only, bit-packed segmented sieve of Eratosthenes.
//!
//! Segments are aligned on multiples of the segment span, so segment `k`
//! always covers `[k·span, (k+1)·span)` and can be produced independently of
//! every other segment.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::fmath::isqrt;

/// Default largest integer the sieve covers; enough for `p_n` up to 2·10⁹.
pub const DEFAULT_CAPACITY: u64 = 2_000_000_000;
/// Default segment size in bytes of sieve bitmap (fits a typical L1 data cache).
pub const DEFAULT_SEGMENT_BYTES: usize = 32 * 1024;
/// Upper limit accepted for the capacity.
pub const MAX_CAPACITY: u64 = 1 << 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest integer the sieve may be asked about.
    pub capacity: u64,
    /// Bitmap bytes per segment; each byte covers 16 integers.
    pub segment_bytes: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            capacity: DEFAULT_CAPACITY,
            segment_bytes: DEFAULT_SEGMENT_BYTES,
        }
    }
}

impl SieveConfig {
    pub fn with_capacity(capacity: u64) -> Self {
        Self {
            capacity,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity < 2 || self.capacity > MAX_CAPACITY {
            return Err(domain!(
                "sieve capacity must be in [2, {MAX_CAPACITY}], got {}",
                self.capacity
            ));
        }
        if self.segment_bytes < 8 || !self.segment_bytes.is_multiple_of(8) {
            return Err(domain!(
                "segment size must be a positive multiple of 8 bytes, got {}",
                self.segment_bytes
            ));
        }
        Ok(())
    }
}

/// The primes of a half-open interval `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct Sieve {
    capacity: u64,
    span: u64,
    /// Odd primes up to `⌊√capacity⌋`.
    base: Vec<u32>,
}

impl Sieve {
    pub fn new(config: SieveConfig) -> Result<Self> {
        config.validate()?;
        let root = isqrt(config.capacity);
        Ok(Self {
            capacity: config.capacity,
            span: config.segment_bytes as u64 * 16,
            base: small_odd_primes(root),
        })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Number of integers covered by one segment.
    pub fn span(&self) -> u64 {
        self.span
    }

    /// Number of segments needed to cover `[0, capacity]`.
    pub fn segment_count(&self) -> u64 {
        self.capacity / self.span + 1
    }

    /// Sieves the aligned segment starting at `lo` into `bits`; bit `i` stands
    /// for `lo + 2i + 1`. Returns the number of valid bits.
    fn fill(&self, lo: u64, bits: &mut Vec<u64>) -> usize {
        debug_assert!(lo.is_multiple_of(self.span));
        let hi = (lo + self.span).min(self.capacity + 1);
        let nbits = ((hi - lo) / 2) as usize;
        let nwords = nbits.div_ceil(64);
        bits.clear();
        bits.resize(nwords, u64::MAX);
        if !nbits.is_multiple_of(64) {
            bits[nwords - 1] = (1u64 << (nbits % 64)) - 1;
        }
        for &p in &self.base {
            let p = p as u64;
            let sq = p * p;
            if sq >= hi {
                break;
            }
            let mut m = sq.max((lo + 1).div_ceil(p) * p);
            if m.is_multiple_of(2) {
                m += p;
            }
            let mut idx = ((m - lo - 1) / 2) as usize;
            let step = p as usize;
            while idx < nbits {
                bits[idx >> 6] &= !(1u64 << (idx & 63));
                idx += step;
            }
        }
        if lo == 0 && nbits > 0 {
            // 1 is not prime
            bits[0] &= !1;
        }
        nbits
    }

    /// Primes of segment number `index`, i.e. of `[index·span, (index+1)·span)`
    /// clipped to the capacity.
    pub fn segment_by_index(&self, index: u64) -> Result<SieveSegment> {
        let lo = index
            .checked_mul(self.span)
            .filter(|&lo| lo <= self.capacity)
            .ok_or(Error::Capacity {
                what: "sieve segment",
                needed: index.saturating_mul(self.span),
                capacity: self.capacity,
            })?;
        let hi = (lo + self.span).min(self.capacity + 1);
        let mut bits = Vec::new();
        self.fill(lo, &mut bits);
        let mut primes = Vec::new();
        if lo == 0 && hi > 2 {
            primes.push(2);
        }
        push_set_bits(lo, &bits, &mut primes);
        Ok(SieveSegment { lo, hi, primes })
    }

    /// Primes in an arbitrary half-open interval `[lo, hi)`.
    pub fn segment(&self, lo: u64, hi: u64) -> Result<SieveSegment> {
        if hi < lo {
            return Err(domain!("empty interval [{lo}, {hi})"));
        }
        if hi > 0 && hi - 1 > self.capacity {
            return Err(Error::Capacity {
                what: "sieve interval",
                needed: hi - 1,
                capacity: self.capacity,
            });
        }
        let primes = self.primes_from(lo).take_while(|&p| p < hi).collect();
        Ok(SieveSegment { lo, hi, primes })
    }

    /// Ascending iterator over all primes `≥ start` up to the capacity.
    pub fn primes_from(&self, start: u64) -> Primes<'_> {
        Primes::new(self, start)
    }

    /// `π(x)`, the number of primes `≤ x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.capacity {
            return Err(Error::Capacity {
                what: "prime_count argument",
                needed: x,
                capacity: self.capacity,
            });
        }
        if x < 2 {
            return Ok(0);
        }
        let mut count = 1; // the prime 2
        let mut bits = Vec::new();
        let mut lo = 0;
        while lo <= x {
            let nbits = self.fill(lo, &mut bits);
            let keep = (((x + 1 - lo) / 2) as usize).min(nbits);
            count += count_prefix(&bits, keep);
            lo += self.span;
        }
        Ok(count)
    }

    /// The `n`-th prime, `p_1 = 2`.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(domain!("prime index must be >= 1"));
        }
        if n == 1 {
            return Ok(2);
        }
        let mut remaining = n - 1;
        let mut bits = Vec::new();
        let mut lo = 0;
        while lo <= self.capacity {
            self.fill(lo, &mut bits);
            for (w, &word) in bits.iter().enumerate() {
                let c = word.count_ones() as u64;
                if c < remaining {
                    remaining -= c;
                    continue;
                }
                let mut word = word;
                for _ in 1..remaining {
                    word &= word - 1;
                }
                let idx = w as u64 * 64 + word.trailing_zeros() as u64;
                return Ok(lo + 2 * idx + 1);
            }
            lo += self.span;
        }
        Err(Error::Capacity {
            what: "prime index",
            needed: n,
            capacity: self.capacity,
        })
    }
}

fn count_prefix(bits: &[u64], nbits: usize) -> u64 {
    let full = nbits / 64;
    let mut c: u64 = bits[..full].iter().map(|w| w.count_ones() as u64).sum();
    if !nbits.is_multiple_of(64) {
        c += (bits[full] & ((1u64 << (nbits % 64)) - 1)).count_ones() as u64;
    }
    c
}

fn push_set_bits(lo: u64, bits: &[u64], out: &mut Vec<u64>) {
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let idx = w as u64 * 64 + word.trailing_zeros() as u64;
            out.push(lo + 2 * idx + 1);
            word &= word - 1;
        }
    }
}

/// Odd primes `≤ limit` by a plain sieve.
fn small_odd_primes(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Iterator returned by [`Sieve::primes_from`].
pub struct Primes<'a> {
    sieve: &'a Sieve,
    bits: Vec<u64>,
    lo: u64,
    word_index: usize,
    word: u64,
    pending_two: bool,
    done: bool,
}

impl<'a> Primes<'a> {
    fn new(sieve: &'a Sieve, start: u64) -> Self {
        let start = start.max(1);
        let mut it = Self {
            sieve,
            bits: Vec::new(),
            lo: (start / sieve.span) * sieve.span,
            word_index: 0,
            word: 0,
            pending_two: start <= 2 && sieve.capacity >= 2,
            done: start > sieve.capacity,
        };
        if !it.done {
            it.load();
            // drop odd candidates below `start`
            let skip = ((start - it.lo) / 2) as usize;
            for w in 0..skip / 64 {
                it.bits[w] = 0;
            }
            if !skip.is_multiple_of(64) && skip / 64 < it.bits.len() {
                it.bits[skip / 64] &= !((1u64 << (skip % 64)) - 1);
            }
            it.word = it.bits.first().copied().unwrap_or(0);
        }
        it
    }

    fn load(&mut self) {
        self.sieve.fill(self.lo, &mut self.bits);
        self.word_index = 0;
        self.word = self.bits.first().copied().unwrap_or(0);
    }
}

impl Iterator for Primes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pending_two {
            self.pending_two = false;
            return Some(2);
        }
        loop {
            if self.done {
                return None;
            }
            if self.word != 0 {
                let idx = self.word_index as u64 * 64 + self.word.trailing_zeros() as u64;
                self.word &= self.word - 1;
                return Some(self.lo + 2 * idx + 1);
            }
            self.word_index += 1;
            if self.word_index < self.bits.len() {
                self.word = self.bits[self.word_index];
                continue;
            }
            self.lo += self.sieve.span;
            if self.lo > self.sieve.capacity {
                self.done = true;
                return None;
            }
            self.load();
        }
    }
}
