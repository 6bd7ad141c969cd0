//! Relation matrices for the weight-system spaces: 6T, XII and FI rows over
//! the degree-n diagram basis, and `dim W_n` = basis size - rank.

use std::time::Instant;

use thiserror::Error;

use crate::case::CaseSpec;
use crate::diagram::{DiagramIndex, SkeletonKind};
use crate::embed::{arrangements, build_term, sites_ascending, Endpoint};
use crate::linalg::{rank_consensus, LinalgError, RankResult, RowEntries, SparseIntMatrix};
use crate::par;

/// A sparse integer combination of degree-`degree` basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    pub degree: usize,
    pub entries: RowEntries,
}

#[derive(Error, Debug)]
pub enum DimError {
    #[error("rank consensus failed for {case} at degree {n}: per-prime ranks {ranks:?}")]
    InconclusiveRank {
        case: String,
        n: usize,
        ranks: Vec<(u64, usize)>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub(crate) fn consensus_or_err(
    case: &CaseSpec,
    n: usize,
    rank: &RankResult,
) -> Result<(), DimError> {
    if rank.consensus {
        return Ok(());
    }
    Err(DimError::InconclusiveRank {
        case: case.label(),
        n,
        ranks: rank
            .primes
            .iter()
            .copied()
            .zip(rank.per_prime.iter().copied())
            .collect(),
    })
}

/// One relation term: a coefficient and the endpoints it inserts.
/// Endpoints sharing a site keep their list order.
struct Term {
    coeff: i64,
    endpoints: Vec<Endpoint>,
}

/// The six 6T terms over sites (i, j, k) = (0, 1, 2). Writing `a_xy` for an
/// arrow with tail at site x and head at site y, the relation is
///
/// ```text
/// a_ij a_ik + a_ij a_jk + a_ik a_jk - a_ik a_ij - a_jk a_ij - a_jk a_ik
/// ```
///
/// where the factor order fixes the local slot order at the one site shared
/// by both arrows.
fn six_t_terms() -> Vec<Term> {
    const I: u8 = 0;
    const J: u8 = 1;
    const K: u8 = 2;
    let product = |coeff: i64, f1: (u8, u8), f2: (u8, u8)| Term {
        coeff,
        endpoints: vec![
            (f1.0, 0, false),
            (f1.1, 0, true),
            (f2.0, 1, false),
            (f2.1, 1, true),
        ],
    };
    vec![
        product(1, (I, J), (I, K)),
        product(1, (I, J), (J, K)),
        product(1, (I, K), (J, K)),
        product(-1, (I, K), (I, J)),
        product(-1, (J, K), (I, J)),
        product(-1, (J, K), (I, K)),
    ]
}

/// XII: both arrows run from site i to site j; `X` matches the tails to the
/// head slots in reversed order, `II` in parallel order; the row is X - II.
fn xii_terms() -> Vec<Term> {
    vec![
        Term {
            coeff: 1,
            endpoints: vec![(0, 0, false), (0, 1, false), (1, 1, true), (1, 0, true)],
        },
        Term {
            coeff: -1,
            endpoints: vec![(0, 0, false), (0, 1, false), (1, 0, true), (1, 1, true)],
        },
    ]
}

fn merge_row(mut cols: Vec<(u32, i64)>) -> RowEntries {
    cols.sort_unstable_by_key(|e| e.0);
    let mut out: RowEntries = Vec::with_capacity(cols.len());
    for (c, v) in cols {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

fn template_rows(
    kind: SkeletonKind,
    n: usize,
    sites: usize,
    terms: &[Term],
    index: &DiagramIndex,
) -> Vec<RelationRow> {
    let inserted = terms[0].endpoints.len() / 2;
    if n < inserted {
        return Vec::new();
    }
    let ambients = crate::diagram::enumerate_diagrams(kind, n - inserted, false);
    let no_sign = vec![false; inserted];
    let chunks = par::map_slice(&ambients, |amb| {
        let mut rows = Vec::new();
        for arr in arrangements(kind, 2 * amb.degree(), sites) {
            if kind == SkeletonKind::Descending && !sites_ascending(&arr) {
                continue;
            }
            let mut cols: Vec<(u32, i64)> = Vec::with_capacity(terms.len());
            for t in terms {
                let d = build_term(amb, &arr, &t.endpoints, &no_sign);
                let idx = index
                    .index_of(&d)
                    .expect("relation term of degree n lies in the degree-n basis");
                cols.push((idx, t.coeff));
            }
            let entries = merge_row(cols);
            if !entries.is_empty() {
                rows.push(RelationRow { degree: n, entries });
            }
        }
        rows
    });
    chunks.into_iter().flatten().collect()
}

/// All 6T relation instances over the degree-n basis. For descending
/// skeletons only site triples with i < j < k along the skeleton are
/// generated.
pub fn generate_6t(kind: SkeletonKind, n: usize, index: &DiagramIndex) -> Vec<RelationRow> {
    if n < 2 {
        return Vec::new();
    }
    template_rows(kind, n, 3, &six_t_terms(), index)
}

/// All XII relation instances; for descending skeletons only pairs with
/// i < j. Instances whose two terms canonicalize equal vanish and are
/// dropped.
pub fn generate_xii(kind: SkeletonKind, n: usize, index: &DiagramIndex) -> Vec<RelationRow> {
    if n < 2 {
        return Vec::new();
    }
    template_rows(kind, n, 2, &xii_terms(), index)
}

/// FI rows: each inserts one isolated arrow (adjacent endpoints) into an
/// ambient of degree n-1 and sets the resulting diagram to zero. Long and
/// round skeletons get both orientations, descending only the
/// skeleton-compatible one.
pub fn generate_fi(kind: SkeletonKind, n: usize, index: &DiagramIndex) -> Vec<RelationRow> {
    if n < 1 {
        return Vec::new();
    }
    let tail_first = Term { coeff: 1, endpoints: vec![(0, 0, false), (0, 0, true)] };
    let head_first = Term { coeff: 1, endpoints: vec![(0, 0, true), (0, 0, false)] };
    let mut rows = template_rows(kind, n, 1, std::slice::from_ref(&tail_first), index);
    if kind != SkeletonKind::Descending {
        rows.extend(template_rows(kind, n, 1, std::slice::from_ref(&head_first), index));
    }
    rows
}

/// The stacked relation matrix for one case and degree, with per-family row
/// counts.
pub struct WeightMatrix {
    pub basis: DiagramIndex,
    pub matrix: SparseIntMatrix,
    pub rows_6t: usize,
    pub rows_xii: usize,
    pub rows_fi: usize,
}

pub fn weight_matrix(case: &CaseSpec, n: usize) -> WeightMatrix {
    let basis = DiagramIndex::build(case.kind, n, false);
    let mut rows: Vec<RelationRow> = Vec::new();
    let (mut rows_6t, mut rows_xii, mut rows_fi) = (0, 0, 0);
    if case.r23.imposes_6t() {
        let r = generate_6t(case.kind, n, &basis);
        rows_6t = r.len();
        rows.extend(r);
    }
    if case.r23.imposes_xii() {
        let r = generate_xii(case.kind, n, &basis);
        rows_xii = r.len();
        rows.extend(r);
    }
    if case.r1.imposes_fi() {
        let r = generate_fi(case.kind, n, &basis);
        rows_fi = r.len();
        rows.extend(r);
    }
    let mut matrix = SparseIntMatrix::new(basis.len());
    for r in rows {
        debug_assert_eq!(r.degree, n);
        matrix.push_row(r.entries);
    }
    WeightMatrix { basis, matrix, rows_6t, rows_xii, rows_fi }
}

pub struct WeightDimensions {
    pub dim: usize,
    pub basis_size: usize,
    pub rows_6t: usize,
    pub rows_xii: usize,
    pub rows_fi: usize,
    pub matrix_rows: usize,
    pub rank: RankResult,
    pub elapsed_ms: u64,
}

/// `dim W_n` = (number of degree-n diagrams) - rank of the relation matrix,
/// with multi-prime consensus required.
pub fn dim_weight_systems(
    case: &CaseSpec,
    n: usize,
    primes: &[u64],
    deadline: Option<Instant>,
) -> Result<WeightDimensions, DimError> {
    let start = Instant::now();
    let wm = weight_matrix(case, n);
    let rank = rank_consensus(&wm.matrix, primes, deadline)?;
    consensus_or_err(case, n, &rank)?;
    Ok(WeightDimensions {
        dim: wm.basis.len() - rank.rank,
        basis_size: wm.basis.len(),
        rows_6t: wm.rows_6t,
        rows_xii: wm.rows_xii,
        rows_fi: wm.rows_fi,
        matrix_rows: wm.matrix.nrows(),
        rank,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
