//! Dense exact-arithmetic rank over the rationals. Slow and simple; used as
//! an independent check of the modular path on small matrices.

use num::rational::BigRational;
use num::{BigInt, Zero};

use super::SparseIntMatrix;

/// Rank of `m` over the rationals by dense fraction-arithmetic elimination.
pub fn dense_rational_rank(m: &SparseIntMatrix) -> usize {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); nc]; nr];
    for (i, j, v) in m.entries() {
        a[i][j] = BigRational::from(BigInt::from(v));
    }
    let mut rank = 0;
    for col in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        let lead = prow[col].clone();
        for trow in tail.iter_mut() {
            if trow[col].is_zero() {
                continue;
            }
            let f = &trow[col] / &lead;
            for j in col..nc {
                let sub = &f * &prow[j];
                trow[j] = &trow[j] - sub;
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}
