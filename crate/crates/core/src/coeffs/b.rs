use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{domain, Result};

/// Memo table for the integers `b_{s,i,j,r}`.
///
/// Rows are built in `j` for a fixed `(s, i)`:
/// `b_{j,0} = b_{j−1,0}(s+j−1)`, `b_{j,j} = b_{j−1,j−1}(−i+j−1)` and
/// `b_{j,r} = b_{j−1,r}(s+j−1) + b_{j−1,r−1}(−i+r−1)` for `0 < r < j`,
/// starting from `b_{0,0} = 1`.
///
/// The table needs `&mut self`; share it by confining one per worker.
#[derive(Debug, Default, Clone)]
pub struct BTable {
    rows: BTreeMap<(u32, u32), Vec<Vec<BigInt>>>,
}

impl BTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, s: u32, i: u32, j: u32, r: u32) -> Result<BigInt> {
        if r > j {
            return Err(domain!("b_{{s,i,j,r}} needs j >= r, got j = {j}, r = {r}"));
        }
        let rows = self.rows.entry((s, i)).or_insert_with(|| vec![vec![BigInt::from(1)]]);
        let (s, i) = (s as i64, i as i64);
        while rows.len() <= j as usize {
            let jj = rows.len() as i64;
            let prev = &rows[rows.len() - 1];
            let grow = BigInt::from(s + jj - 1);
            let mut row = Vec::with_capacity(jj as usize + 1);
            row.push(&prev[0] * &grow);
            for r in 1..jj {
                let diag = BigInt::from(-i + r - 1);
                row.push(&prev[r as usize] * &grow + &prev[r as usize - 1] * diag);
            }
            row.push(&prev[jj as usize - 1] * BigInt::from(-i + jj - 1));
            rows.push(row);
        }
        Ok(rows[j as usize][r as usize].clone())
    }
}

/// One-off `b_{s,i,j,r}` lookup; use a [`BTable`] for repeated queries.
pub fn b_coeff(s: u32, i: u32, j: u32, r: u32) -> Result<BigInt> {
    BTable::new().get(s, i, j, r)
}
