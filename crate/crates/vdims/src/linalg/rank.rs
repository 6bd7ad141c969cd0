//! Rank over GF(p): sparse elimination with Markowitz-style pivoting and a
//! dense finishing phase once the active submatrix turns dense. The whole
//! computation is deterministic for a fixed (matrix, prime).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::{is_prime, LinalgError, SparseIntMatrix};
use crate::par;

#[derive(Clone, Copy, Debug, Default)]
pub struct PivotStats {
    pub sparse_pivots: usize,
    pub dense_pivots: usize,
    /// Shape of the active submatrix handed to the dense phase.
    pub dense_rows: usize,
    pub dense_cols: usize,
}

#[derive(Clone, Debug)]
pub struct RankResult {
    /// Max over the per-prime ranks (the rational rank is >= rank mod p).
    pub rank: usize,
    pub primes: Vec<u64>,
    pub per_prime: Vec<usize>,
    /// True iff all per-prime ranks agree.
    pub consensus: bool,
    pub elapsed: Duration,
    pub stats: Vec<PivotStats>,
}

fn check_modulus(p: u64) -> Result<(), LinalgError> {
    if p < 2 {
        return Err(LinalgError::ModulusTooSmall(p));
    }
    if p >= 1 << 31 {
        return Err(LinalgError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(LinalgError::NotPrime(p));
    }
    Ok(())
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    // operands < 2^31, so the product fits u64
    a * b % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

#[inline]
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

type SparseRow = Vec<(u32, u64)>;

struct Elimination {
    p: u64,
    rows: Vec<Option<SparseRow>>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    live_rows: usize,
    live_cols: usize,
    nnz: usize,
    // stale candidate ids accumulated since the last global compaction
    stale: usize,
    deadline: Option<Instant>,
    stats: PivotStats,
}

impl Elimination {
    fn new(m: &SparseIntMatrix, p: u64, deadline: Option<Instant>) -> Self {
        let ncols = m.ncols();
        let mut rows: Vec<Option<SparseRow>> = Vec::with_capacity(m.nrows());
        let mut col_rows = vec![Vec::new(); ncols];
        let mut col_count = vec![0u32; ncols];
        let mut nnz = 0;
        for r in m.rows() {
            let reduced: SparseRow = r
                .iter()
                .filter_map(|&(c, v)| {
                    let v = v.rem_euclid(p as i64) as u64;
                    (v != 0).then_some((c, v))
                })
                .collect();
            if reduced.is_empty() {
                continue;
            }
            let id = rows.len() as u32;
            for &(c, _) in &reduced {
                col_rows[c as usize].push(id);
                col_count[c as usize] += 1;
            }
            nnz += reduced.len();
            rows.push(Some(reduced));
        }
        let live_rows = rows.len();
        let mut heap = BinaryHeap::with_capacity(ncols);
        let mut live_cols = 0;
        for (c, &cnt) in col_count.iter().enumerate() {
            if cnt > 0 {
                heap.push(Reverse((cnt, c as u32)));
                live_cols += 1;
            }
        }
        Elimination {
            p,
            rows,
            col_rows,
            col_count,
            heap,
            live_rows,
            live_cols,
            nnz,
            stale: 0,
            deadline,
            stats: PivotStats::default(),
        }
    }

    /// Rebuild every candidate list from the live rows, freeing the stale
    /// ids that row updates leave behind.
    fn compact_candidates(&mut self) {
        for v in &mut self.col_rows {
            v.clear();
        }
        for (id, row) in self.rows.iter().enumerate() {
            if let Some(r) = row {
                for &(c, _) in r {
                    self.col_rows[c as usize].push(id as u32);
                }
            }
        }
        for v in &mut self.col_rows {
            v.shrink_to_fit();
        }
        self.stale = 0;
    }

    fn count_change(&mut self, col: u32, delta: i32) {
        let cnt = &mut self.col_count[col as usize];
        let old = *cnt;
        *cnt = (*cnt as i32 + delta) as u32;
        if old == 0 && *cnt > 0 {
            self.live_cols += 1;
        } else if old > 0 && *cnt == 0 {
            self.live_cols -= 1;
        }
        if *cnt > 0 {
            self.heap.push(Reverse((*cnt, col)));
        }
    }

    /// target <- target - factor * pivot (pivot row is normalized to lead 1).
    fn axpy_row(&mut self, target: u32, pivot: &SparseRow, factor: u64) {
        let p = self.p;
        let old = self.rows[target as usize].take().expect("live row");
        let mut merged: SparseRow = Vec::with_capacity(old.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot.len() {
            let take_old = j >= pivot.len() || (i < old.len() && old[i].0 < pivot[j].0);
            let take_piv = i >= old.len() || (j < pivot.len() && pivot[j].0 < old[i].0);
            if take_old {
                merged.push(old[i]);
                i += 1;
            } else if take_piv {
                let (c, v) = pivot[j];
                let nv = (p - mul_mod(factor, v, p)) % p;
                if nv != 0 {
                    merged.push((c, nv));
                    self.count_change(c, 1);
                    self.col_rows[c as usize].push(target);
                    self.stale += 1;
                }
                j += 1;
            } else {
                let (c, v_old) = old[i];
                let nv = (v_old + mul_mod(p - factor, pivot[j].1, p)) % p;
                if nv != 0 {
                    merged.push((c, nv));
                } else {
                    self.count_change(c, -1);
                    self.stale += 1;
                }
                i += 1;
                j += 1;
            }
        }
        self.nnz = self.nnz + merged.len() - old.len();
        if merged.is_empty() {
            self.live_rows -= 1;
            self.rows[target as usize] = None;
        } else {
            self.rows[target as usize] = Some(merged);
        }
    }

    /// Live, deduplicated rows currently containing `col`; also compacts the
    /// candidate list.
    fn rebuild_candidates(&mut self, col: u32) -> Vec<u32> {
        let mut ids = std::mem::take(&mut self.col_rows[col as usize]);
        ids.sort_unstable();
        ids.dedup();
        ids.retain(|&id| {
            self.rows[id as usize]
                .as_ref()
                .is_some_and(|r| r.binary_search_by_key(&col, |e| e.0).is_ok())
        });
        self.col_rows[col as usize] = ids.clone();
        ids
    }

    fn should_go_dense(&self) -> bool {
        if self.live_rows == 0 || self.live_cols == 0 {
            return false;
        }
        let cells = self.live_rows.saturating_mul(self.live_cols);
        cells <= 1 << 18 || (cells <= 64_000_000 && self.nnz.saturating_mul(16) >= cells)
    }

    fn run(mut self) -> Result<(usize, PivotStats), LinalgError> {
        let mut rank = 0usize;
        let mut steps = 0u32;
        loop {
            steps += 1;
            if steps.is_multiple_of(64) {
                if let Some(d) = self.deadline {
                    if Instant::now() > d {
                        return Err(LinalgError::BudgetExceeded);
                    }
                }
            }
            if self.should_go_dense() {
                self.stats.sparse_pivots = rank;
                let dense_rank = self.dense_finish()?;
                let stats = self.stats;
                return Ok((rank + dense_rank, stats));
            }
            if self.stale > 4 * self.nnz + 1_000_000 {
                self.compact_candidates();
            }
            let Some(Reverse((cnt, col))) = self.heap.pop() else {
                break;
            };
            if self.col_count[col as usize] != cnt || cnt == 0 {
                continue; // stale heap entry
            }
            let cands = self.rebuild_candidates(col);
            debug_assert_eq!(cands.len(), cnt as usize);
            if cands.is_empty() {
                continue;
            }
            // shortest row wins, ties by id
            let pivot_id = *cands
                .iter()
                .min_by_key(|&&id| (self.rows[id as usize].as_ref().unwrap().len(), id))
                .unwrap();
            let mut pivot = self.rows[pivot_id as usize].take().expect("pivot row");
            let lead = pivot
                .iter()
                .find(|e| e.0 == col)
                .expect("pivot column present")
                .1;
            let inv = inv_mod(lead, self.p);
            for e in pivot.iter_mut() {
                e.1 = mul_mod(e.1, inv, self.p);
            }
            for id in cands {
                if id == pivot_id {
                    continue;
                }
                let factor = self.rows[id as usize]
                    .as_ref()
                    .and_then(|r| r.binary_search_by_key(&col, |e| e.0).ok().map(|k| r[k].1));
                if let Some(factor) = factor {
                    self.axpy_row(id, &pivot, factor);
                }
            }
            // retire pivot row and column
            for &(c, _) in &pivot {
                self.count_change(c, -1);
            }
            self.nnz -= pivot.len();
            self.live_rows -= 1;
            rank += 1;
            debug_assert_eq!(self.col_count[col as usize], 0);
        }
        self.stats.sparse_pivots = rank;
        let stats = self.stats;
        Ok((rank, stats))
    }

    fn dense_finish(&mut self) -> Result<usize, LinalgError> {
        let p = self.p;
        let cols: Vec<u32> = (0..self.col_count.len() as u32)
            .filter(|&c| self.col_count[c as usize] > 0)
            .collect();
        let mut remap = vec![u32::MAX; self.col_count.len()];
        for (i, &c) in cols.iter().enumerate() {
            remap[c as usize] = i as u32;
        }
        let nc = cols.len();
        let mut dense: Vec<Vec<u64>> = Vec::with_capacity(self.live_rows);
        for row in self.rows.iter().flatten() {
            let mut d = vec![0u64; nc];
            for &(c, v) in row {
                d[remap[c as usize] as usize] = v;
            }
            dense.push(d);
        }
        self.stats.dense_rows = dense.len();
        self.stats.dense_cols = nc;

        // With p below 2^20, products stay below 2^40 and sums of up to 2^23
        // of them fit in u64, so reduction can wait until a row pivots.
        let delayed = p < (1 << 20) && dense.len() < (1 << 23);
        let nr = dense.len();
        let mut rank = 0usize;
        for col in 0..nc {
            if let Some(d) = self.deadline {
                if col % 16 == 0 && Instant::now() > d {
                    return Err(LinalgError::BudgetExceeded);
                }
            }
            let mut piv = None;
            for (r, row) in dense.iter_mut().enumerate().skip(rank) {
                row[col] %= p;
                if row[col] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            dense.swap(rank, piv);
            let (head, tail) = dense.split_at_mut(rank + 1);
            let prow = &mut head[rank];
            for v in prow[col..].iter_mut() {
                *v %= p;
            }
            let inv = inv_mod(prow[col], p);
            for v in prow[col..].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            for trow in tail.iter_mut() {
                let f = trow[col] % p;
                if f == 0 {
                    trow[col] = 0;
                    continue;
                }
                let g = p - f;
                if delayed {
                    for (t, &s) in trow[col..].iter_mut().zip(prow[col..].iter()) {
                        *t += g * s;
                    }
                } else {
                    for (t, &s) in trow[col..].iter_mut().zip(prow[col..].iter()) {
                        *t = (*t + g * s) % p;
                    }
                }
                debug_assert_eq!(trow[col] % p, 0);
                trow[col] = 0;
            }
            rank += 1;
            if rank == nr {
                break;
            }
        }
        self.stats.dense_pivots = rank;
        Ok(rank)
    }
}

fn rank_mod_p_full(
    m: &SparseIntMatrix,
    p: u64,
    deadline: Option<Instant>,
) -> Result<(usize, PivotStats), LinalgError> {
    check_modulus(p)?;
    Elimination::new(m, p, deadline).run()
}

/// Rank of `m` over GF(p). Deterministic for fixed `(m, p)`.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize, LinalgError> {
    rank_mod_p_full(m, p, None).map(|(r, _)| r)
}

/// Rank modulo every prime in `primes`; the reported rank is the maximum
/// (the rank over the rationals is at least the rank mod any prime) and
/// `consensus` records whether all primes agreed.
pub fn rank_consensus(
    m: &SparseIntMatrix,
    primes: &[u64],
    deadline: Option<Instant>,
) -> Result<RankResult, LinalgError> {
    let mut distinct: Vec<u64> = Vec::new();
    for &p in primes {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    if distinct.len() < 2 {
        return Err(LinalgError::NotEnoughPrimes(primes.to_vec()));
    }
    for &p in &distinct {
        check_modulus(p)?;
    }
    let start = Instant::now();
    let results = par::map_vec(distinct.clone(), |p| rank_mod_p_full(m, p, deadline));
    let mut per_prime = Vec::with_capacity(results.len());
    let mut stats = Vec::with_capacity(results.len());
    for r in results {
        let (rank, st) = r?;
        per_prime.push(rank);
        stats.push(st);
    }
    let rank = *per_prime.iter().max().expect("nonempty");
    let consensus = per_prime.iter().all(|&r| r == rank);
    super::stats::bump_rank_calls();
    Ok(RankResult {
        rank,
        primes: distinct,
        per_prime,
        consensus,
        elapsed: start.elapsed(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_PRIMES;

    #[test]
    fn identity_rank() {
        let m = SparseIntMatrix::identity(3);
        assert_eq!(rank_mod_p(&m, 1_000_003).unwrap(), 3);
    }

    #[test]
    fn zero_matrix_rank() {
        let m = SparseIntMatrix::with_rows(7, vec![vec![], vec![]]);
        assert_eq!(rank_mod_p(&m, 1_000_003).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_moduli() {
        let m = SparseIntMatrix::identity(2);
        assert_eq!(rank_mod_p(&m, 1_000_001), Err(LinalgError::NotPrime(1_000_001)));
        assert_eq!(rank_mod_p(&m, 1), Err(LinalgError::ModulusTooSmall(1)));
        assert!(matches!(
            rank_mod_p(&m, (1 << 31) + 11),
            Err(LinalgError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn unlucky_prime_is_reported_not_resolved() {
        let m = SparseIntMatrix::with_rows(1, vec![vec![(0, 1_000_003)]]);
        let res = rank_consensus(&m, &[1_000_003, 999_983], None).unwrap();
        assert_eq!(res.rank, 1);
        assert!(!res.consensus);
        assert_eq!(res.per_prime.iter().copied().min(), Some(0));
    }

    #[test]
    fn consensus_on_identity() {
        let m = SparseIntMatrix::identity(5);
        let res = rank_consensus(&m, &DEFAULT_PRIMES, None).unwrap();
        assert_eq!(res.rank, 5);
        assert!(res.consensus);
    }

    #[test]
    fn consensus_requires_two_distinct_primes() {
        let m = SparseIntMatrix::identity(2);
        assert!(matches!(
            rank_consensus(&m, &[999_983, 999_983], None),
            Err(LinalgError::NotEnoughPrimes(_))
        ));
    }

    #[test]
    fn expired_budget_aborts_the_computation() {
        let m = SparseIntMatrix::identity(100);
        let past = Instant::now() - Duration::from_secs(1);
        assert_eq!(
            rank_consensus(&m, &DEFAULT_PRIMES, Some(past)).unwrap_err(),
            LinalgError::BudgetExceeded
        );
    }

    #[test]
    fn repeated_runs_are_deterministic() {
        let mut rows = Vec::new();
        for i in 0..25u32 {
            rows.push(vec![(i % 13, 2i64), ((i * 7 + 3) % 13, -1), ((i * 5 + 1) % 13, 3)]);
        }
        let m = SparseIntMatrix::with_rows(13, rows);
        let a = rank_consensus(&m, &DEFAULT_PRIMES, None).unwrap();
        let b = rank_consensus(&m, &DEFAULT_PRIMES, None).unwrap();
        assert_eq!(a.rank, b.rank);
        assert_eq!(a.per_prime, b.per_prime);
        assert_eq!(a.primes, b.primes);
    }

    #[test]
    fn dense_and_sparse_agree_on_structured_matrix() {
        // banded matrix with dependent tail rows
        let mut rows = Vec::new();
        for i in 0..40u32 {
            rows.push(vec![(i, 1i64), (i + 1, 2), (i + 2, 1)]);
        }
        // duplicates of earlier rows
        for i in 0..10u32 {
            rows.push(vec![(i, 1i64), (i + 1, 2), (i + 2, 1)]);
        }
        let m = SparseIntMatrix::with_rows(42, rows);
        let res = rank_consensus(&m, &DEFAULT_PRIMES, None).unwrap();
        assert_eq!(res.rank, 40);
        assert!(res.consensus);
    }
}
