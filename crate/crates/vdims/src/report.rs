//! Orchestration of the 18-case grid: per-case runs, caching, verification
//! against the reference tables and rendering.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::{Cache, CacheKey};
use crate::case::{CaseSpec, R1Mode, R23Mode};
use crate::diagram::{enumerate_diagrams, SkeletonKind};
use crate::golden;
use crate::linalg::DEFAULT_PRIMES;
use crate::polyak::{dim_polyak, SignMode};
use crate::relations::{dim_weight_systems, DimError};
use crate::{par, CONVENTIONS_VERSION};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WCell {
    pub basis_size: usize,
    pub rows_6t: usize,
    pub rows_xii: usize,
    pub rows_fi: usize,
    pub matrix_rows: usize,
    pub rank: usize,
    pub dim: u64,
    pub primes: Vec<u64>,
    pub per_prime_ranks: Vec<usize>,
    pub consensus: bool,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PCell {
    pub mode: SignMode,
    pub basis_size: usize,
    pub basis_per_degree: Vec<usize>,
    pub rows_per_template: Vec<(String, usize)>,
    pub aux_rows: usize,
    pub matrix_rows: usize,
    pub rank: usize,
    pub dim_p: u64,
    pub primes: Vec<u64>,
    pub per_prime_ranks: Vec<usize>,
    pub consensus: bool,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VCell {
    pub p: PCell,
    pub dim_v: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub n: usize,
    /// Unsigned diagram count at this degree (the weight-system basis).
    pub diagram_count: usize,
    pub w: Option<WCell>,
    pub v: Option<VCell>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimensionReport {
    pub case: CaseSpec,
    pub records: Vec<DegreeRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spaces {
    pub w: bool,
    pub v: bool,
}

impl Spaces {
    pub const BOTH: Spaces = Spaces { w: true, v: true };

    pub fn parse(s: &str) -> Option<Spaces> {
        match s {
            "w" => Some(Spaces { w: true, v: false }),
            "v" => Some(Spaces { w: false, v: true }),
            "both" => Some(Spaces::BOTH),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub primes: Vec<u64>,
    pub mode: SignMode,
    /// Optional wall-clock budget per (case, degree, space) cell.
    pub budget: Option<Duration>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            primes: DEFAULT_PRIMES.to_vec(),
            mode: SignMode::PositiveOnly,
            budget: None,
        }
    }
}

#[derive(Error, Debug)]
#[error("{case} failed at degree {n}: {source}")]
pub struct CaseError {
    pub case: CaseSpec,
    pub n: usize,
    #[source]
    pub source: DimError,
}

fn w_key(case: &CaseSpec, n: usize, opts: &RunOptions) -> CacheKey {
    CacheKey {
        case: case.label(),
        n,
        space: "w".into(),
        primes: opts.primes.clone(),
        version: CONVENTIONS_VERSION.into(),
    }
}

fn p_key(case: &CaseSpec, n: usize, opts: &RunOptions) -> CacheKey {
    CacheKey {
        case: case.label(),
        n,
        space: format!("p/{}", opts.mode.label()),
        primes: opts.primes.clone(),
        version: CONVENTIONS_VERSION.into(),
    }
}

fn compute_w(
    case: &CaseSpec,
    n: usize,
    opts: &RunOptions,
    cache: Option<&Cache>,
) -> Result<WCell, DimError> {
    let key = w_key(case, n, opts);
    if let Some(c) = cache {
        if let Some(hit) = c.get::<WCell>(&key) {
            return Ok(hit);
        }
    }
    let deadline = opts.budget.map(|b| Instant::now() + b);
    let w = dim_weight_systems(case, n, &opts.primes, deadline)?;
    let cell = WCell {
        basis_size: w.basis_size,
        rows_6t: w.rows_6t,
        rows_xii: w.rows_xii,
        rows_fi: w.rows_fi,
        matrix_rows: w.matrix_rows,
        rank: w.rank.rank,
        dim: w.dim as u64,
        primes: w.rank.primes.clone(),
        per_prime_ranks: w.rank.per_prime.clone(),
        consensus: w.rank.consensus,
        wall_ms: w.elapsed_ms,
    };
    if let Some(c) = cache {
        let _ = c.put(&key, &cell);
    }
    Ok(cell)
}

fn compute_p(
    case: &CaseSpec,
    n: usize,
    opts: &RunOptions,
    cache: Option<&Cache>,
) -> Result<PCell, DimError> {
    let key = p_key(case, n, opts);
    if let Some(c) = cache {
        if let Some(hit) = c.get::<PCell>(&key) {
            return Ok(hit);
        }
    }
    let deadline = opts.budget.map(|b| Instant::now() + b);
    let p = dim_polyak(case, n, opts.mode, &opts.primes, deadline)?;
    let cell = PCell {
        mode: opts.mode,
        basis_size: p.basis_size,
        basis_per_degree: p.basis_per_degree.clone(),
        rows_per_template: p.rows_per_template.clone(),
        aux_rows: p.aux_rows,
        matrix_rows: p.matrix_rows,
        rank: p.rank.rank,
        dim_p: p.dim_p as u64,
        primes: p.rank.primes.clone(),
        per_prime_ranks: p.rank.per_prime.clone(),
        consensus: p.rank.consensus,
        wall_ms: p.elapsed_ms,
    };
    if let Some(c) = cache {
        let _ = c.put(&key, &cell);
    }
    Ok(cell)
}

/// Compute the requested spaces for one case, degrees `0..=n_max`.
pub fn run_case(
    case: &CaseSpec,
    n_max: usize,
    spaces: Spaces,
    opts: &RunOptions,
    cache: Option<&Cache>,
) -> Result<DimensionReport, CaseError> {
    let mut records = Vec::new();
    if !spaces.w && !spaces.v {
        return Ok(DimensionReport { case: *case, records });
    }
    let err = |n: usize| move |source: DimError| CaseError { case: *case, n, source };
    let mut prev_p: Option<PCell> = None;
    for n in 0..=n_max {
        let diagram_count = enumerate_diagrams(case.kind, n, false).len();
        let w = if spaces.w {
            Some(compute_w(case, n, opts, cache).map_err(err(n))?)
        } else {
            None
        };
        let v = if spaces.v {
            let p = compute_p(case, n, opts, cache).map_err(err(n))?;
            let dim_v = match &prev_p {
                None => p.dim_p,
                Some(lo) => p.dim_p.checked_sub(lo.dim_p).ok_or_else(|| CaseError {
                    case: *case,
                    n,
                    source: DimError::Internal(format!(
                        "filtration not monotone: dim P_{} = {} < dim P_{} = {}",
                        n,
                        p.dim_p,
                        n - 1,
                        lo.dim_p
                    )),
                })?,
            };
            prev_p = Some(p.clone());
            Some(VCell { p, dim_v })
        } else {
            None
        };
        records.push(DegreeRecord { n, diagram_count, w, v });
    }
    Ok(DimensionReport { case: *case, records })
}

pub struct GridOutcome {
    pub reports: Vec<DimensionReport>,
    pub failures: Vec<CaseError>,
}

/// Map `run_case` over the whole 18-case grid; independent cases run
/// concurrently and failures are collected, not propagated.
pub fn run_all(
    n_max: usize,
    spaces: Spaces,
    opts: &RunOptions,
    cache: Option<&Cache>,
) -> GridOutcome {
    let results = par::map_vec(CaseSpec::all(), |case| {
        run_case(&case, n_max, spaces, opts, cache)
    });
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => failures.push(e),
        }
    }
    GridOutcome { reports, failures }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellVerdict {
    pub case: CaseSpec,
    pub n: usize,
    pub space: &'static str,
    pub expected: u64,
    pub computed: Option<u64>,
    pub status: CellStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureCell {
    pub case: CaseSpec,
    pub n: usize,
    pub dim_w: u64,
    pub dim_v: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Verdict {
    pub cells: Vec<CellVerdict>,
    pub conjecture_checked: usize,
    pub conjecture_mismatches: Vec<ConjectureCell>,
}

impl Verdict {
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skip = 0;
        for c in &self.cells {
            match c.status {
                CellStatus::Pass => pass += 1,
                CellStatus::Fail => fail += 1,
                CellStatus::Skip => skip += 1,
            }
        }
        (pass, fail, skip)
    }

    pub fn ok(&self) -> bool {
        self.counts().1 == 0 && self.conjecture_mismatches.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.cells {
            let status = match c.status {
                CellStatus::Pass => "PASS",
                CellStatus::Fail => "FAIL",
                CellStatus::Skip => "SKIP",
            };
            let computed = match c.computed {
                Some(v) => v.to_string(),
                None => "-".to_string(),
            };
            s.push_str(&format!(
                "{status} {case} n={n} {space} expected={expected} computed={computed}\n",
                case = c.case,
                n = c.n,
                space = c.space,
                expected = c.expected,
            ));
        }
        let (pass, fail, skip) = self.counts();
        s.push_str(&format!("cells: {pass} pass, {fail} fail, {skip} skip\n"));
        if self.conjecture_mismatches.is_empty() {
            s.push_str(&format!(
                "dim W = dim V check: {} cells, all equal\n",
                self.conjecture_checked
            ));
        } else {
            for m in &self.conjecture_mismatches {
                s.push_str(&format!(
                    "MISMATCH {} n={} dim W = {} but dim V = {}\n",
                    m.case, m.n, m.dim_w, m.dim_v
                ));
            }
        }
        s
    }
}

/// Compare computed reports against the reference tables, cell by cell.
/// Cells the reports do not cover are SKIP. The `dim W = dim V` check is
/// reported separately from table agreement.
pub fn verify_reports(reports: &[DimensionReport], n_max: usize) -> Verdict {
    let n_max = n_max.min(golden::MAX_DEGREE);
    let mut verdict = Verdict::default();
    for case in CaseSpec::all() {
        let report = reports.iter().find(|r| r.case == case);
        for n in 0..=n_max {
            let expected = golden::expected(&case, n).expect("n clamped to table range");
            let record = report.and_then(|r| r.records.iter().find(|rec| rec.n == n));
            for (space, computed) in [
                ("W", record.and_then(|r| r.w.as_ref()).map(|w| w.dim)),
                ("V", record.and_then(|r| r.v.as_ref()).map(|v| v.dim_v)),
            ] {
                let status = match computed {
                    None => CellStatus::Skip,
                    Some(d) if d == expected => CellStatus::Pass,
                    Some(_) => CellStatus::Fail,
                };
                verdict.cells.push(CellVerdict { case, n, space, expected, computed, status });
            }
            if let Some(rec) = record {
                if let (Some(w), Some(v)) = (&rec.w, &rec.v) {
                    verdict.conjecture_checked += 1;
                    if w.dim != v.dim_v {
                        verdict.conjecture_mismatches.push(ConjectureCell {
                            case,
                            n,
                            dim_w: w.dim,
                            dim_v: v.dim_v,
                        });
                    }
                }
            }
        }
    }
    verdict
}

/// Markdown table in the published layout: one row per (R23, R1) pair, one
/// column per skeleton, values for n = 1..=n_max.
pub fn markdown_grid(reports: &[DimensionReport], n_max: usize) -> String {
    let mut s = String::new();
    s.push_str("| dim V_{n/n-1} / dim W_n for n = 1.. | round | long | descending |\n");
    s.push_str("|---|---|---|---|\n");
    for r23 in R23Mode::ALL {
        for r1 in R1Mode::ALL {
            let mut cells = Vec::new();
            for kind in [SkeletonKind::Round, SkeletonKind::Long, SkeletonKind::Descending] {
                let case = CaseSpec::new(kind, r23, r1);
                let cell = reports
                    .iter()
                    .find(|r| r.case == case)
                    .map(|rep| {
                        (1..=n_max)
                            .map(|n| {
                                rep.records
                                    .iter()
                                    .find(|rec| rec.n == n)
                                    .and_then(|rec| {
                                        rec.v
                                            .as_ref()
                                            .map(|v| v.dim_v)
                                            .or_else(|| rec.w.as_ref().map(|w| w.dim))
                                    })
                                    .map(|d| d.to_string())
                                    .unwrap_or_else(|| "?".into())
                            })
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .unwrap_or_else(|| "-".into());
                cells.push(cell);
            }
            s.push_str(&format!(
                "| {} R23, {} R1 | {} | {} | {} |\n",
                r23.cli_name(),
                r1.cli_name(),
                cells[0],
                cells[1],
                cells[2]
            ));
        }
    }
    s
}

/// Per-degree detail table for a single case.
pub fn markdown_case(report: &DimensionReport) -> String {
    let mut s = format!("case: {}\n\n", report.case);
    s.push_str("| n | diagrams | dim W | dim V | dim P | consensus | ms |\n");
    s.push_str("|---|---|---|---|---|---|---|\n");
    for rec in &report.records {
        let w = rec.w.as_ref().map(|w| w.dim.to_string()).unwrap_or("-".into());
        let v = rec.v.as_ref().map(|v| v.dim_v.to_string()).unwrap_or("-".into());
        let p = rec.v.as_ref().map(|v| v.p.dim_p.to_string()).unwrap_or("-".into());
        let cons = rec
            .w
            .as_ref()
            .map(|w| w.consensus)
            .into_iter()
            .chain(rec.v.as_ref().map(|v| v.p.consensus))
            .all(|c| c);
        let ms = rec.w.as_ref().map(|w| w.wall_ms).unwrap_or(0)
            + rec.v.as_ref().map(|v| v.p.wall_ms).unwrap_or(0);
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            rec.n, rec.diagram_count, w, v, p, cons, ms
        ));
    }
    s
}

/// CSV rows (with header) across all reports.
pub fn csv_rows(reports: &[DimensionReport]) -> String {
    let mut s = String::from("skeleton,r23,r1,n,diagrams,dim_w,dim_v,dim_p,consensus,wall_ms\n");
    for rep in reports {
        for rec in &rep.records {
            let w = rec.w.as_ref().map(|w| w.dim.to_string()).unwrap_or_default();
            let v = rec.v.as_ref().map(|v| v.dim_v.to_string()).unwrap_or_default();
            let p = rec.v.as_ref().map(|v| v.p.dim_p.to_string()).unwrap_or_default();
            let cons = rec
                .w
                .as_ref()
                .map(|w| w.consensus)
                .into_iter()
                .chain(rec.v.as_ref().map(|v| v.p.consensus))
                .all(|c| c);
            let ms = rec.w.as_ref().map(|w| w.wall_ms).unwrap_or(0)
                + rec.v.as_ref().map(|v| v.p.wall_ms).unwrap_or(0);
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                rep.case.kind.cli_name(),
                rep.case.r23.cli_name(),
                rep.case.r1.cli_name(),
                rec.n,
                rec.diagram_count,
                w,
                v,
                p,
                cons,
                ms
            ));
        }
    }
    s
}
