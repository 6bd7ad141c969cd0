//! Exact rank of sparse integer matrices: reduction modulo word-sized
//! primes with multi-prime consensus, plus a dense rational oracle for
//! small instances and SMS / Matrix Market interchange formats.

pub mod io;
pub mod oracle;
mod rank;

pub use rank::{rank_consensus, rank_mod_p, PivotStats, RankResult};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sorted-by-column, duplicate-free, zero-free row entries.
pub type RowEntries = Vec<(u32, i64)>;

/// Default prime pair for consensus ranks. Far larger than any relation
/// coefficient produced by the pipeline (those stay below `n + 2`).
pub const DEFAULT_PRIMES: [u64; 2] = [1_000_003, 999_983];

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small")]
    ModulusTooSmall(u64),
    #[error("modulus {0} exceeds the supported bound 2^31")]
    ModulusTooLarge(u64),
    #[error("rank consensus needs at least two distinct primes, got {0:?}")]
    NotEnoughPrimes(Vec<u64>),
    #[error("time budget exhausted during rank computation")]
    BudgetExceeded,
}

/// Sparse integer matrix in normalized row form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    ncols: usize,
    rows: Vec<RowEntries>,
}

impl SparseIntMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseIntMatrix { ncols, rows: Vec::new() }
    }

    pub fn with_rows(ncols: usize, rows: Vec<RowEntries>) -> Self {
        let mut m = SparseIntMatrix::new(ncols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    /// Append a row. Entries are sorted by column, duplicates summed and
    /// zeros dropped. Empty rows are kept; relation assembly drops them
    /// before they reach the matrix.
    pub fn push_row(&mut self, mut entries: Vec<(u32, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: RowEntries = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!((c as usize) < self.ncols, "column {c} out of range");
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.rows.push(merged);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn rows(&self) -> &[RowEntries] {
        &self.rows
    }

    pub fn max_abs(&self) -> i64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|e| e.1.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(c, v)| (i, c as usize, v)))
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i as u32, 1)]).collect();
        SparseIntMatrix { ncols: n, rows }
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Counters for tests and cache-coherence checks.
pub mod stats {
    use std::sync::atomic::{AtomicU64, Ordering};

    static RANK_CALLS: AtomicU64 = AtomicU64::new(0);

    pub(crate) fn bump_rank_calls() {
        RANK_CALLS.fetch_add(1, Ordering::Relaxed);
    }

    /// Number of consensus rank computations performed by this process.
    pub fn rank_invocations() -> u64 {
        RANK_CALLS.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_row_normalizes() {
        let mut m = SparseIntMatrix::new(4);
        m.push_row(vec![(2, 1), (0, 3), (2, -1), (1, 0)]);
        assert_eq!(m.rows()[0], vec![(0, 3)]);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(999_983));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1));
        assert!(!is_prime(1_000_001)); // 101 * 9901
        assert!(is_prime((1 << 31) - 1));
    }
}
