//! The truncated algebra of signed arrow diagrams modulo Reidemeister-move
//! relations, and the finite-type dimensions `dim V_{n/n-1}` it yields.
//!
//! Every move relation comes from one generic rule: embed the move's local
//! strands into an ambient diagram, then sum the insertions of every
//! nonempty arrow subset of the left side minus those of the right side,
//! dropping terms above the degree cap. In the default `PositiveOnly` mode
//! negative arrows are eliminated by rewriting them into truncated
//! alternating stacks of positive arrows, which shrinks the basis by a
//! factor of about `2^n`.

mod templates;

pub use templates::{move_templates, LocalSide, MoveId, MoveTemplate, TemplateVariant};

use std::collections::HashMap;
use std::time::Instant;

use crate::case::CaseSpec;
use crate::diagram::{enumerate_diagrams, ArrowDiagram, DiagramIndex, SkeletonKind, Slot};
use crate::embed::{arrangements, build_raw};
use crate::linalg::{rank_consensus, RankResult, RowEntries, SparseIntMatrix};
use crate::par;
use crate::relations::{consensus_or_err, DimError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SignMode {
    /// Basis of signed diagrams; move rows are used as generated.
    Signed,
    /// Basis of positive diagrams; negative arrows are rewritten away.
    PositiveOnly,
}

impl SignMode {
    pub fn label(self) -> &'static str {
        match self {
            SignMode::Signed => "signed",
            SignMode::PositiveOnly => "positive",
        }
    }
}

/// Graded diagram basis of all degrees `0..=max_degree`.
pub struct PolyakBasis {
    pub kind: SkeletonKind,
    pub max_degree: usize,
    pub mode: SignMode,
    per_degree: Vec<DiagramIndex>,
    offsets: Vec<u32>,
}

impl PolyakBasis {
    pub fn build(kind: SkeletonKind, max_degree: usize, mode: SignMode) -> Self {
        let per_degree: Vec<DiagramIndex> = (0..=max_degree)
            .map(|d| DiagramIndex::build(kind, d, mode == SignMode::Signed))
            .collect();
        let mut offsets = Vec::with_capacity(per_degree.len() + 1);
        let mut acc = 0u32;
        for idx in &per_degree {
            offsets.push(acc);
            acc += idx.len() as u32;
        }
        offsets.push(acc);
        PolyakBasis { kind, max_degree, mode, per_degree, offsets }
    }

    pub fn size(&self) -> usize {
        *self.offsets.last().unwrap() as usize
    }

    pub fn size_at(&self, degree: usize) -> usize {
        self.per_degree[degree].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.per_degree.iter().map(|i| i.len()).collect()
    }

    pub fn index_of(&self, d: &ArrowDiagram) -> Option<u32> {
        let deg = d.degree();
        if deg > self.max_degree {
            return None;
        }
        self.per_degree[deg]
            .index_of(d)
            .map(|i| self.offsets[deg] + i)
    }

    pub fn get(&self, index: u32) -> &ArrowDiagram {
        let deg = self.degree_of(index);
        self.per_degree[deg].get(index - self.offsets[deg])
    }

    pub fn degree_of(&self, index: u32) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }
}

/// One move-relation row; entries span mixed degrees `<= max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneousRow {
    pub entries: RowEntries,
}

/// Stack replacement style for negative-arrow elimination: the co-oriented
/// R2 cancellation stacks copies in parallel, the cyclic one totally
/// twisted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StackStyle {
    Parallel,
    Twisted,
}

/// Expand the first negative arrow of `raw` into its truncated alternating
/// stack series, recursively, producing positive diagrams with
/// coefficients. Diagrams above `cap` arrows are dropped.
fn rewrite_into(
    kind: SkeletonKind,
    raw: &[Slot],
    cap: usize,
    style: StackStyle,
    coeff: i64,
    fresh: u32,
    out: &mut Vec<(ArrowDiagram, i64)>,
) {
    let degree = raw.len() / 2;
    if degree > cap {
        return;
    }
    let Some(neg_key) = raw.iter().find(|s| s.negative).map(|s| s.arrow) else {
        out.push((ArrowDiagram::from_raw(kind, raw), coeff));
        return;
    };
    let tail_pos = raw
        .iter()
        .position(|s| s.arrow == neg_key && !s.head)
        .expect("negative arrow tail");
    let head_pos = raw
        .iter()
        .position(|s| s.arrow == neg_key && s.head)
        .expect("negative arrow head");
    let k_max = cap - (degree - 1);
    let mut buf: Vec<Slot> = Vec::with_capacity(raw.len() + 2 * k_max);
    for k in 1..=k_max {
        buf.clear();
        for (i, s) in raw.iter().enumerate() {
            if i == tail_pos {
                for j in 0..k as u32 {
                    buf.push(Slot::new(fresh + j, false, false));
                }
            } else if i == head_pos {
                match style {
                    StackStyle::Parallel => {
                        for j in 0..k as u32 {
                            buf.push(Slot::new(fresh + j, true, false));
                        }
                    }
                    StackStyle::Twisted => {
                        for j in (0..k as u32).rev() {
                            buf.push(Slot::new(fresh + j, true, false));
                        }
                    }
                }
            } else {
                buf.push(*s);
            }
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        rewrite_into(kind, &buf, cap, style, coeff * sign, fresh + k as u32, out);
    }
}

/// Public face of the rewriting rule: the expansion of one signed slot list
/// into the positive basis, truncated at `cap` arrows.
pub fn rewrite_positive(
    kind: SkeletonKind,
    raw: &[Slot],
    cap: usize,
    style: StackStyle,
) -> Vec<(ArrowDiagram, i64)> {
    let fresh = raw.iter().map(|s| s.arrow + 1).max().unwrap_or(0);
    let mut out = Vec::new();
    rewrite_into(kind, raw, cap, style, 1, fresh, &mut out);
    out
}

/// Merge terms by diagram; `None` signals a term outside the basis, which
/// for descending skeletons gates the whole instance away.
fn finish_row(
    basis: &PolyakBasis,
    mut terms: Vec<(ArrowDiagram, i64)>,
) -> Option<InhomogeneousRow> {
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(ArrowDiagram, i64)> = Vec::with_capacity(terms.len());
    for (d, c) in terms {
        match merged.last_mut() {
            Some(last) if last.0 == d => last.1 += c,
            _ => merged.push((d, c)),
        }
    }
    merged.retain(|e| e.1 != 0);
    if merged.is_empty() {
        return None;
    }
    let mut entries: RowEntries = Vec::with_capacity(merged.len());
    for (d, c) in merged {
        match basis.index_of(&d) {
            Some(i) => entries.push((i, c)),
            None => {
                debug_assert!(
                    basis.kind == SkeletonKind::Descending,
                    "term {d:?} missing from a non-descending basis"
                );
                return None;
            }
        }
    }
    entries.sort_unstable_by_key(|e| e.0);
    Some(InhomogeneousRow { entries })
}

fn elimination_style(case: &CaseSpec) -> StackStyle {
    // every R23 mode includes the co-oriented R2 cancellation
    debug_assert!(move_templates(case).iter().any(|t| t.id == MoveId::R2b));
    StackStyle::Parallel
}

fn variant_rows_for_ambient(
    case: &CaseSpec,
    variant: &TemplateVariant,
    ambient: &ArrowDiagram,
    n: usize,
    basis: &PolyakBasis,
) -> Vec<InhomogeneousRow> {
    let kind = basis.kind;
    let style = elimination_style(case);
    let sides: [(&LocalSide, i64); 2] = [(&variant.a, 1), (&variant.b, -1)];
    let mut rows = Vec::new();
    for arr in arrangements(kind, 2 * ambient.degree(), variant.strands) {
        let mut terms: Vec<(ArrowDiagram, i64)> = Vec::new();
        for (side, side_sign) in sides {
            let arrows = side.arrow_count();
            for mask in 1u32..(1 << arrows) {
                let endpoints = side.subset_endpoints(mask);
                let raw = build_raw(ambient, &arr, &endpoints, &side.negatives);
                if raw.len() / 2 > n {
                    continue;
                }
                match basis.mode {
                    SignMode::Signed => {
                        terms.push((ArrowDiagram::from_raw(kind, &raw), side_sign));
                    }
                    SignMode::PositiveOnly => {
                        let fresh = ambient.degree() as u32 + 8;
                        rewrite_into(kind, &raw, n, style, side_sign, fresh, &mut terms);
                    }
                }
            }
        }
        if let Some(row) = finish_row(basis, terms) {
            rows.push(row);
        }
    }
    rows
}

/// All relation rows contributed by one move template: one row per
/// (ambient diagram, embedding, variant), built by the nonempty-subset rule
/// and truncated at degree `n`.
pub fn generate_move_relations(
    template: &MoveTemplate,
    case: &CaseSpec,
    n: usize,
    basis: &PolyakBasis,
) -> Vec<InhomogeneousRow> {
    let mut rows = Vec::new();
    for d_amb in 0..n {
        let ambients = enumerate_diagrams(basis.kind, d_amb, basis.mode == SignMode::Signed);
        rows.extend(template_rows_over(case, template, &ambients, n, basis));
    }
    rows
}

fn template_rows_over(
    case: &CaseSpec,
    template: &MoveTemplate,
    ambients: &[ArrowDiagram],
    n: usize,
    basis: &PolyakBasis,
) -> Vec<InhomogeneousRow> {
    let chunks = par::map_slice(ambients, |amb| {
        let mut rows = Vec::new();
        for v in &template.variants {
            rows.extend(variant_rows_for_ambient(case, v, amb, n, basis));
        }
        rows
    });
    chunks.into_iter().flatten().collect()
}

/// The compatibility rows between the parallel and the twisted expansion of
/// a negative arrow: for every placement of the two endpoints, the two
/// truncated stack series are set equal. Their lowest-order difference is
/// the XII relation.
pub fn auxiliary_rows(kind: SkeletonKind, n: usize, basis: &PolyakBasis) -> Vec<InhomogeneousRow> {
    let mut rows = Vec::new();
    for d_amb in 0..n.saturating_sub(1) {
        let ambients = enumerate_diagrams(kind, d_amb, false);
        let chunks = par::map_slice(&ambients, |amb| {
            let mut local = Vec::new();
            for arr in arrangements(kind, 2 * amb.degree(), 2) {
                let mut terms: Vec<(ArrowDiagram, i64)> = Vec::new();
                for k in 2..=(n - amb.degree()) {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let negs = vec![false; k];
                    let mut par_ep: Vec<(u8, u8, bool)> = Vec::with_capacity(2 * k);
                    let mut tw_ep: Vec<(u8, u8, bool)> = Vec::with_capacity(2 * k);
                    for j in 0..k as u8 {
                        par_ep.push((0, j, false));
                        tw_ep.push((0, j, false));
                    }
                    for j in 0..k as u8 {
                        par_ep.push((1, j, true));
                        tw_ep.push((1, k as u8 - 1 - j, true));
                    }
                    let par = ArrowDiagram::from_raw(kind, &build_raw(amb, &arr, &par_ep, &negs));
                    let tw = ArrowDiagram::from_raw(kind, &build_raw(amb, &arr, &tw_ep, &negs));
                    terms.push((par, sign));
                    terms.push((tw, -sign));
                }
                if let Some(row) = finish_row(basis, terms) {
                    local.push(row);
                }
            }
            local
        });
        rows.extend(chunks.into_iter().flatten());
    }
    rows
}

/// The negative-arrow elimination data for a case: the stack style used for
/// rewriting and the auxiliary compatibility rows (nonempty exactly when
/// both R2 flavors are modded out).
pub struct Elimination {
    pub style: StackStyle,
    pub auxiliary: Vec<InhomogeneousRow>,
}

pub fn eliminate_negative_arrows(case: &CaseSpec, n: usize, basis: &PolyakBasis) -> Elimination {
    let has_r2c = move_templates(case).iter().any(|t| t.id == MoveId::R2c);
    let auxiliary = if has_r2c {
        auxiliary_rows(basis.kind, n, basis)
    } else {
        Vec::new()
    };
    Elimination { style: elimination_style(case), auxiliary }
}

/// The assembled relation matrix for `P_n` in one case, with row
/// provenance.
pub struct PolyakMatrix {
    pub basis_per_degree: Vec<usize>,
    pub basis_size: usize,
    /// Rows per move template after empty rows and gated instances drop out.
    pub rows_per_template: Vec<(String, usize)>,
    pub aux_rows: usize,
    pub matrix: SparseIntMatrix,
}

pub fn polyak_matrix(case: &CaseSpec, n: usize, mode: SignMode) -> PolyakMatrix {
    let basis = PolyakBasis::build(case.kind, n, mode);
    let templates = move_templates(case);
    let mut matrix = SparseIntMatrix::new(basis.size());
    let mut rows_per_template = Vec::new();
    // ambient lists are shared across templates, one list per degree
    let ambients: Vec<Vec<ArrowDiagram>> = (0..n)
        .map(|d| enumerate_diagrams(case.kind, d, mode == SignMode::Signed))
        .collect();
    for t in &templates {
        // rewriting turns the R2 rows themselves into tautologies
        if mode == SignMode::PositiveOnly && t.id.is_r2() {
            rows_per_template.push((t.id.label().to_string(), 0));
            continue;
        }
        let mut count = 0;
        for ambs in &ambients {
            let rows = template_rows_over(case, t, ambs, n, &basis);
            count += rows.len();
            for r in rows {
                matrix.push_row(r.entries);
            }
        }
        rows_per_template.push((t.id.label().to_string(), count));
    }
    let mut aux_rows = 0;
    if mode == SignMode::PositiveOnly {
        let elim = eliminate_negative_arrows(case, n, &basis);
        aux_rows = elim.auxiliary.len();
        for r in elim.auxiliary {
            matrix.push_row(r.entries);
        }
    }
    PolyakMatrix {
        basis_per_degree: basis.sizes(),
        basis_size: basis.size(),
        rows_per_template,
        aux_rows,
        matrix,
    }
}

pub struct PolyakDimensions {
    pub dim_p: usize,
    pub basis_size: usize,
    pub basis_per_degree: Vec<usize>,
    pub rows_per_template: Vec<(String, usize)>,
    pub aux_rows: usize,
    pub matrix_rows: usize,
    pub rank: RankResult,
    pub elapsed_ms: u64,
}

/// `dim P_n` = (diagrams of degree <= n) - rank(move relations truncated at
/// n), in the requested sign mode.
pub fn dim_polyak(
    case: &CaseSpec,
    n: usize,
    mode: SignMode,
    primes: &[u64],
    deadline: Option<Instant>,
) -> Result<PolyakDimensions, DimError> {
    let start = Instant::now();
    let pm = polyak_matrix(case, n, mode);
    let rank = rank_consensus(&pm.matrix, primes, deadline)?;
    consensus_or_err(case, n, &rank)?;
    Ok(PolyakDimensions {
        dim_p: pm.basis_size - rank.rank,
        basis_size: pm.basis_size,
        basis_per_degree: pm.basis_per_degree,
        rows_per_template: pm.rows_per_template,
        aux_rows: pm.aux_rows,
        matrix_rows: pm.matrix.nrows(),
        rank,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// `dim V_{n/n-1}` = `dim P_n - dim P_{n-1}`.
pub fn dim_v_quotient(
    case: &CaseSpec,
    n: usize,
    mode: SignMode,
    primes: &[u64],
    deadline: Option<Instant>,
) -> Result<usize, DimError> {
    assert!(n >= 1);
    let hi = dim_polyak(case, n, mode, primes, deadline)?;
    let lo = dim_polyak(case, n - 1, mode, primes, deadline)?;
    hi.dim_p.checked_sub(lo.dim_p).ok_or_else(|| {
        DimError::Internal(format!(
            "filtration not monotone for {case} at degree {n}: {} < {}",
            hi.dim_p, lo.dim_p
        ))
    })
}

/// Per-case manifest for diffing between implementations: basis sizes per
/// degree and row counts per relation source.
pub fn case_manifest(case: &CaseSpec, n: usize, mode: SignMode, pm: &PolyakMatrix) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = writeln!(s, "case: {}", case.label());
    let _ = writeln!(s, "mode: {}", mode.label());
    let _ = writeln!(s, "max-degree: {n}");
    let sizes: Vec<String> = pm.basis_per_degree.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "basis: {} | total {}", sizes.join(" "), pm.basis_size);
    for (label, count) in &pm.rows_per_template {
        let _ = writeln!(s, "rows {label}: {count}");
    }
    let _ = writeln!(s, "rows aux: {}", pm.aux_rows);
    let _ = writeln!(
        s,
        "matrix: {} x {} with {} nonzeros",
        pm.matrix.nrows(),
        pm.basis_size,
        pm.matrix.nnz()
    );
    s
}

/// Row as a diagram -> coefficient map; test and verification helper.
pub fn row_terms(basis: &PolyakBasis, row: &InhomogeneousRow) -> HashMap<ArrowDiagram, i64> {
    row.entries
        .iter()
        .map(|&(i, c)| (basis.get(i).clone(), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::{R1Mode, R23Mode};
    use crate::linalg::DEFAULT_PRIMES;

    fn long_case(r23: R23Mode, r1: R1Mode) -> CaseSpec {
        CaseSpec::new(SkeletonKind::Long, r23, r1)
    }

    #[test]
    fn r2_subset_rule_reproduces_three_term_rows() {
        // signed basis, empty ambient: every R2 row is (two-arrow) + a + b
        let case = long_case(R23Mode::R2Only, R1Mode::NoR1);
        let basis = PolyakBasis::build(SkeletonKind::Long, 2, SignMode::Signed);
        for t in move_templates(&case) {
            let rows = generate_move_relations(&t, &case, 2, &basis);
            let three_term: Vec<_> = rows.iter().filter(|r| r.entries.len() == 3).collect();
            assert!(!three_term.is_empty(), "{:?} produced no full rows", t.id);
            for row in three_term {
                assert!(row.entries.iter().all(|&(_, c)| c == 1));
                let mut degs: Vec<usize> =
                    row.entries.iter().map(|&(i, _)| basis.degree_of(i)).collect();
                degs.sort_unstable();
                assert_eq!(degs, vec![1, 1, 2]);
                // the two single-arrow terms carry opposite crossing signs
                let singles: Vec<&ArrowDiagram> = row
                    .entries
                    .iter()
                    .filter(|&&(i, _)| basis.degree_of(i) == 1)
                    .map(|&(i, _)| basis.get(i))
                    .collect();
                assert_ne!(singles[0].is_signed(), singles[1].is_signed());
            }
        }
    }

    #[test]
    fn r1_rows_are_single_isolated_arrow_insertions() {
        let case = long_case(R23Mode::Standard, R1Mode::ModR1);
        let basis = PolyakBasis::build(SkeletonKind::Long, 2, SignMode::Signed);
        let t = move_templates(&case)
            .into_iter()
            .find(|t| t.id == MoveId::R1Plus)
            .unwrap();
        let rows = generate_move_relations(&t, &case, 2, &basis);
        assert!(!rows.is_empty());
        for row in rows {
            assert_eq!(row.entries.len(), 1);
            assert_eq!(row.entries[0].1, 1);
            assert!(basis.get(row.entries[0].0).has_isolated_arrow());
        }
    }

    #[test]
    fn rewrite_degree1_is_single_negation() {
        // one negative arrow, cap 1: b -> -a in place
        let raw = [Slot::new(0, false, true), Slot::new(0, true, true)];
        let out = rewrite_positive(SkeletonKind::Long, &raw, 1, StackStyle::Parallel);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].1, -1);
        assert_eq!(out[0].0.to_string(), "1: T1 H1");
    }

    #[test]
    fn rewrite_stacks_alternate_up_to_cap() {
        let raw = [Slot::new(0, false, true), Slot::new(0, true, true)];
        let out = rewrite_positive(SkeletonKind::Long, &raw, 3, StackStyle::Parallel);
        // -a + a^2 - a^3 with parallel stacks
        assert_eq!(out.len(), 3);
        let mut by_degree: Vec<(usize, i64, String)> = out
            .iter()
            .map(|(d, c)| (d.degree(), *c, d.to_string()))
            .collect();
        by_degree.sort();
        assert_eq!(by_degree[0], (1, -1, "1: T1 H1".into()));
        assert_eq!(by_degree[1], (2, 1, "2: T1 T2 H1 H2".into()));
        assert_eq!(by_degree[2], (3, -1, "3: T1 T2 T3 H1 H2 H3".into()));

        let twisted = rewrite_positive(SkeletonKind::Long, &raw, 2, StackStyle::Twisted);
        let squares: Vec<String> = twisted
            .iter()
            .filter(|(d, _)| d.degree() == 2)
            .map(|(d, _)| d.to_string())
            .collect();
        assert_eq!(squares, vec!["2: T1 T2 H2 H1".to_string()]);
    }

    #[test]
    fn auxiliary_rows_start_with_the_xii_difference() {
        // n = 2 on a bare line: parallel square minus twisted square
        let basis = PolyakBasis::build(SkeletonKind::Long, 2, SignMode::PositiveOnly);
        let rows = auxiliary_rows(SkeletonKind::Long, 2, &basis);
        assert_eq!(rows.len(), 2);
        for row in rows {
            let terms = row_terms(&basis, &row);
            assert_eq!(terms.len(), 2);
            assert_eq!(terms.values().sum::<i64>(), 0);
            for d in terms.keys() {
                assert_eq!(d.degree(), 2);
            }
        }
    }

    #[test]
    fn rewritten_r2b_rows_vanish() {
        let case = long_case(R23Mode::BraidLike, R1Mode::NoR1);
        let basis = PolyakBasis::build(SkeletonKind::Long, 3, SignMode::PositiveOnly);
        let t = move_templates(&case)
            .into_iter()
            .find(|t| t.id == MoveId::R2b)
            .unwrap();
        let rows = generate_move_relations(&t, &case, 3, &basis);
        assert!(rows.is_empty(), "rewriting must cancel R2b rows, got {}", rows.len());
    }

    #[test]
    fn r3_pair_terms_cancel_between_sides_at_low_cap() {
        // at cap 1 only singleton subsets survive, and they cancel exactly
        let case = long_case(R23Mode::BraidLike, R1Mode::NoR1);
        let basis = PolyakBasis::build(SkeletonKind::Long, 1, SignMode::Signed);
        let t = move_templates(&case)
            .into_iter()
            .find(|t| t.id == MoveId::R3b)
            .unwrap();
        assert!(generate_move_relations(&t, &case, 1, &basis).is_empty());
    }

    /// Frozen hand expansion of one R3 instance (co-oriented strands,
    /// heights A > B > C, the three sites in order on a bare line, cap 3).
    /// Singleton subsets cancel between the sides; the surviving pair terms
    /// give the six-term degree-2 content and the triples one degree-3
    /// difference:
    ///
    /// ```text
    /// (T1 H1 T2 H2) + (T1 T2 H1 H2) - 2 (T1 T2 H2 H1)
    ///   + (T1 T2 H1 T3 H2 H3) - (T1 T2 T3 H2 H3 H1)
    /// ```
    #[test]
    fn r3_row_matches_hand_expansion() {
        let case = long_case(R23Mode::BraidLike, R1Mode::NoR1);
        let basis = PolyakBasis::build(SkeletonKind::Long, 3, SignMode::Signed);
        let t = move_templates(&case)
            .into_iter()
            .find(|t| t.id == MoveId::R3b)
            .unwrap();
        let rows = template_rows_over(
            &case,
            &t,
            &[ArrowDiagram::empty(SkeletonKind::Long)],
            3,
            &basis,
        );
        let parse = |s: &str| ArrowDiagram::parse(SkeletonKind::Long, s).unwrap();
        let expected: HashMap<ArrowDiagram, i64> = [
            (parse("2: T1 H1 T2 H2"), 1),
            (parse("2: T1 T2 H1 H2"), 1),
            (parse("2: T1 T2 H2 H1"), -2),
            (parse("3: T1 T2 H1 T3 H2 H3"), 1),
            (parse("3: T1 T2 T3 H2 H3 H1"), -1),
        ]
        .into_iter()
        .collect();
        assert!(
            rows.iter().any(|r| row_terms(&basis, r) == expected),
            "hand-expanded R3 row not found among {} generated rows",
            rows.len()
        );
    }

    #[test]
    fn dim_p_degree0_is_one_everywhere() {
        for case in CaseSpec::all() {
            let d = dim_polyak(&case, 0, SignMode::PositiveOnly, &DEFAULT_PRIMES, None).unwrap();
            assert_eq!(d.dim_p, 1, "{case}");
        }
    }

    #[test]
    fn signed_and_positive_agree_on_small_degrees() {
        for case in [
            long_case(R23Mode::Standard, R1Mode::ModR1),
            long_case(R23Mode::R2Only, R1Mode::NoR1),
            CaseSpec::new(SkeletonKind::Round, R23Mode::BraidLike, R1Mode::NoR1),
            CaseSpec::new(SkeletonKind::Descending, R23Mode::Standard, R1Mode::NoR1),
        ] {
            for n in 0..=2 {
                let pos =
                    dim_polyak(&case, n, SignMode::PositiveOnly, &DEFAULT_PRIMES, None).unwrap();
                let sig = dim_polyak(&case, n, SignMode::Signed, &DEFAULT_PRIMES, None).unwrap();
                assert_eq!(pos.dim_p, sig.dim_p, "{case} n={n}");
            }
        }
    }

    #[test]
    fn quotient_dims_match_small_table_entries() {
        let v = |case: &CaseSpec, n| {
            dim_v_quotient(case, n, SignMode::PositiveOnly, &DEFAULT_PRIMES, None).unwrap()
        };
        let case = long_case(R23Mode::Standard, R1Mode::ModR1);
        assert_eq!(v(&case, 2), 2);
        let case = long_case(R23Mode::R2Only, R1Mode::NoR1);
        assert_eq!(v(&case, 2), 10);
        let case = CaseSpec::new(SkeletonKind::Descending, R23Mode::Standard, R1Mode::ModR1);
        assert_eq!(v(&case, 3), 1);
    }

    #[test]
    fn truncation_drops_exactly_the_high_degree_terms() {
        // rows generated at cap n, viewed termwise, equal the degree-<=n
        // projection of rows generated at a higher cap
        let case = long_case(R23Mode::BraidLike, R1Mode::NoR1);
        let t = move_templates(&case)
            .into_iter()
            .find(|t| t.id == MoveId::R3b)
            .unwrap();
        let low = PolyakBasis::build(SkeletonKind::Long, 2, SignMode::Signed);
        let high = PolyakBasis::build(SkeletonKind::Long, 4, SignMode::Signed);
        // compare rows from the empty ambient only (degree-0 ambient)
        let rows_low: Vec<HashMap<ArrowDiagram, i64>> =
            template_rows_over(&case, &t, &[ArrowDiagram::empty(SkeletonKind::Long)], 2, &low)
                .iter()
                .map(|r| row_terms(&low, r))
                .collect();
        let rows_high: Vec<HashMap<ArrowDiagram, i64>> =
            template_rows_over(&case, &t, &[ArrowDiagram::empty(SkeletonKind::Long)], 4, &high)
                .iter()
                .map(|r| {
                    row_terms(&high, r)
                        .into_iter()
                        .filter(|(d, _)| d.degree() <= 2)
                        .collect()
                })
                .filter(|m: &HashMap<ArrowDiagram, i64>| !m.is_empty())
                .collect();
        for r in &rows_low {
            assert!(
                rows_high.iter().any(|h| h == r),
                "truncated row missing from projected high-cap rows"
            );
        }
    }

    #[test]
    fn monotone_filtration() {
        for case in [
            long_case(R23Mode::Standard, R1Mode::NoR1),
            CaseSpec::new(SkeletonKind::Round, R23Mode::R2Only, R1Mode::ModR1),
        ] {
            let mut prev = 0;
            for n in 0..=3 {
                let d = dim_polyak(&case, n, SignMode::PositiveOnly, &DEFAULT_PRIMES, None)
                    .unwrap()
                    .dim_p;
                assert!(d >= prev, "{case}: dim P_{n} = {d} < {prev}");
                prev = d;
            }
        }
    }
}
