use alloc::collections::BTreeMap;

use num_traits::One;

use super::{int, Rational};
use crate::error::{domain, Result};

/// Coefficients `a_{is}`, `0 ≤ i ≤ s ≤ m`, of the asymptotic expansion of
/// `p_n` in powers of `1/log n` and `log log n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AisTable {
    m: u32,
    entries: BTreeMap<(u32, u32), Rational>,
}

impl AisTable {
    /// Builds a table from `((i, s), value)` pairs. Every entry with
    /// `0 ≤ i ≤ s ≤ m`, `s ≥ 1` must be present exactly once and `a_{ss} = 1`.
    pub fn new<I>(m: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), Rational)>,
    {
        if m == 0 {
            return Err(domain!("a_is table needs m >= 1"));
        }
        let mut map = BTreeMap::new();
        for ((i, s), v) in entries {
            if s == 0 || s > m || i > s {
                return Err(domain!("a_{{{i},{s}}} is outside 0 <= i <= s <= {m}, s >= 1"));
            }
            if map.insert((i, s), v).is_some() {
                return Err(domain!("a_{{{i},{s}}} given twice"));
            }
        }
        for s in 1..=m {
            for i in 0..=s {
                match map.get(&(i, s)) {
                    None => return Err(domain!("a_{{{i},{s}}} missing from table with m = {m}")),
                    Some(v) if i == s && !v.is_one() => {
                        return Err(domain!("a_{{{s},{s}}} must equal 1, got {v}"))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { m, entries: map })
    }

    /// The `m = 2` table: `a₀₁ = −2, a₁₁ = 1, a₀₂ = 11, a₁₂ = −6, a₂₂ = 1`.
    pub fn builtin_m2() -> Self {
        Self::new(
            2,
            [
                ((0, 1), int(-2)),
                ((1, 1), int(1)),
                ((0, 2), int(11)),
                ((1, 2), int(-6)),
                ((2, 2), int(1)),
            ],
        )
        .expect("built-in table is complete")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `a_{is}`; panics outside the table, which [`AisTable::new`] makes total.
    pub fn get(&self, i: u32, s: u32) -> &Rational {
        &self.entries[&(i, s)]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// The sub-table of depth `m ≤ self.m()`.
    pub fn truncated(&self, m: u32) -> Result<Self> {
        if m == 0 || m > self.m {
            return Err(domain!("cannot truncate a depth-{} table to {m}", self.m));
        }
        Self::new(
            m,
            self.entries
                .iter()
                .filter(|((_, s), _)| *s <= m)
                .map(|(k, v)| (*k, v.clone())),
        )
    }
}
