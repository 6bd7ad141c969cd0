use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vdims::cache::{default_cache_dir, Cache};
use vdims::case::{CaseSpec, R1Mode, R23Mode};
use vdims::diagram::{enumerate_diagrams, SkeletonKind};
use vdims::linalg::{self, SparseIntMatrix, DEFAULT_PRIMES};
use vdims::polyak::{case_manifest, polyak_matrix, SignMode};
use vdims::relations::weight_matrix;
use vdims::report::{
    csv_rows, markdown_case, markdown_grid, run_all, run_case, verify_reports, DimensionReport,
    RunOptions, Spaces,
};

#[derive(Parser)]
#[command(name = "vdims", version, about = "Dimension tables for finite type invariants and weight systems of virtual knots")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Cache directory (defaults to VDIMS_CACHE_DIR or .vdims-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Disable the result cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Comma-separated primes for consensus ranks
    /// (defaults to VDIMS_PRIMES or 1000003,999983)
    #[arg(long, global = true)]
    primes: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SkeletonArg {
    Round,
    Long,
    Descending,
}

#[derive(Clone, Copy, ValueEnum)]
enum R23Arg {
    Standard,
    Braid,
    #[value(name = "r2only")]
    R2Only,
}

#[derive(Clone, Copy, ValueEnum)]
enum R1Arg {
    Mod,
    No,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    W,
    V,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Positive,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormatArg {
    Md,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormatArg {
    Sms,
    Mtx,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixSpaceArg {
    W,
    V,
}

impl From<SkeletonArg> for SkeletonKind {
    fn from(a: SkeletonArg) -> Self {
        match a {
            SkeletonArg::Round => SkeletonKind::Round,
            SkeletonArg::Long => SkeletonKind::Long,
            SkeletonArg::Descending => SkeletonKind::Descending,
        }
    }
}

impl From<R23Arg> for R23Mode {
    fn from(a: R23Arg) -> Self {
        match a {
            R23Arg::Standard => R23Mode::Standard,
            R23Arg::Braid => R23Mode::BraidLike,
            R23Arg::R2Only => R23Mode::R2Only,
        }
    }
}

impl From<R1Arg> for R1Mode {
    fn from(a: R1Arg) -> Self {
        match a {
            R1Arg::Mod => R1Mode::ModR1,
            R1Arg::No => R1Mode::NoR1,
        }
    }
}

impl From<ModeArg> for SignMode {
    fn from(a: ModeArg) -> Self {
        match a {
            ModeArg::Positive => SignMode::PositiveOnly,
            ModeArg::Signed => SignMode::Signed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute dimensions for one case (all three case flags) or for the
    /// full 18-case grid (no case flags)
    Run {
        #[arg(long)]
        skeleton: Option<SkeletonArg>,
        #[arg(long)]
        r23: Option<R23Arg>,
        #[arg(long)]
        r1: Option<R1Arg>,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = SpaceArg::Both)]
        space: SpaceArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = TableFormatArg::Md)]
        format: TableFormatArg,
        /// Write the machine-readable structured report here
        #[arg(long)]
        report_out: Option<PathBuf>,
        /// Wall-clock budget per (case, degree, space) cell, in seconds
        #[arg(long)]
        time_budget_secs: Option<u64>,
    },
    /// Run the grid and check every cell against the reference tables;
    /// exits nonzero on any FAIL
    Verify {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
        #[arg(long)]
        time_budget_secs: Option<u64>,
    },
    /// Export a relation matrix for third-party rank verification
    ExportMatrix {
        #[arg(long)]
        skeleton: SkeletonArg,
        #[arg(long)]
        r23: R23Arg,
        #[arg(long)]
        r1: R1Arg,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = MatrixSpaceArg::W)]
        space: MatrixSpaceArg,
        #[arg(long, value_enum, default_value_t = MatrixFormatArg::Sms)]
        format: MatrixFormatArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
    },
    /// Import a matrix file and print its consensus rank
    RankMatrix {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormatArg::Sms)]
        format: MatrixFormatArg,
    },
    /// Print the diagram basis in the line-per-diagram text format
    DumpDiagrams {
        #[arg(long)]
        skeleton: SkeletonArg,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        signed: bool,
    },
    /// Write the per-case structural manifest (basis sizes, row counts)
    Manifest {
        #[arg(long)]
        skeleton: SkeletonArg,
        #[arg(long)]
        r23: R23Arg,
        #[arg(long)]
        r1: R1Arg,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_primes(flag: &Option<String>) -> Result<Vec<u64>> {
    let raw = match flag {
        Some(s) => Some(s.clone()),
        None => std::env::var("VDIMS_PRIMES").ok(),
    };
    let Some(raw) = raw else {
        return Ok(DEFAULT_PRIMES.to_vec());
    };
    let mut out = Vec::new();
    for tok in raw.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let p: u64 = tok.parse().with_context(|| format!("bad prime {tok:?}"))?;
        if !linalg::is_prime(p) {
            bail!("{p} is not prime");
        }
        out.push(p);
    }
    if out.len() < 2 {
        bail!("need at least two primes for consensus ranks");
    }
    Ok(out)
}

fn open_cache(cli: &Cli) -> Result<Option<Cache>> {
    if cli.no_cache {
        return Ok(None);
    }
    let dir = cli.cache_dir.clone().unwrap_or_else(default_cache_dir);
    Ok(Some(Cache::open(&dir).with_context(|| {
        format!("cannot open cache directory {}", dir.display())
    })?))
}

fn check_degree(n: usize) -> Result<()> {
    if n > 6 {
        bail!("--max-degree {n} exceeds the supported limit of 6");
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    max_degree: usize,
    primes: &'a [u64],
    mode: &'a str,
    reports: &'a [DimensionReport],
}

fn write_report(path: &PathBuf, opts: &RunOptions, n: usize, reports: &[DimensionReport]) -> Result<()> {
    let file = ReportFile {
        max_degree: n,
        primes: &opts.primes,
        mode: opts.mode.label(),
        reports,
    };
    let out = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(out), &file)?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let primes = resolve_primes(&cli.primes)?;
    match &cli.cmd {
        Cmd::Run {
            skeleton,
            r23,
            r1,
            max_degree,
            space,
            mode,
            format,
            report_out,
            time_budget_secs,
        } => {
            check_degree(*max_degree)?;
            let opts = RunOptions {
                primes,
                mode: (*mode).into(),
                budget: time_budget_secs.map(Duration::from_secs),
            };
            let spaces = match space {
                SpaceArg::W => Spaces { w: true, v: false },
                SpaceArg::V => Spaces { w: false, v: true },
                SpaceArg::Both => Spaces::BOTH,
            };
            let cache = open_cache(&cli)?;
            let reports: Vec<DimensionReport> = match (skeleton, r23, r1) {
                (Some(k), Some(r23), Some(r1)) => {
                    let case = CaseSpec::new((*k).into(), (*r23).into(), (*r1).into());
                    let rep = run_case(&case, *max_degree, spaces, &opts, cache.as_ref())?;
                    match format {
                        TableFormatArg::Md => print!("{}", markdown_case(&rep)),
                        TableFormatArg::Csv => print!("{}", csv_rows(std::slice::from_ref(&rep))),
                    }
                    vec![rep]
                }
                (None, None, None) => {
                    let out = run_all(*max_degree, spaces, &opts, cache.as_ref());
                    match format {
                        TableFormatArg::Md => print!("{}", markdown_grid(&out.reports, *max_degree)),
                        TableFormatArg::Csv => print!("{}", csv_rows(&out.reports)),
                    }
                    for f in &out.failures {
                        eprintln!("error: {f}");
                    }
                    if !out.failures.is_empty() {
                        if let Some(path) = report_out {
                            write_report(path, &opts, *max_degree, &out.reports)?;
                        }
                        std::process::exit(1);
                    }
                    out.reports
                }
                _ => bail!("give all of --skeleton, --r23, --r1 for one case, or none for the grid"),
            };
            if let Some(path) = report_out {
                write_report(path, &opts, *max_degree, &reports)?;
            }
        }
        Cmd::Verify { max_degree, mode, time_budget_secs } => {
            check_degree(*max_degree)?;
            let opts = RunOptions {
                primes,
                mode: (*mode).into(),
                budget: time_budget_secs.map(Duration::from_secs),
            };
            let cache = open_cache(&cli)?;
            let out = run_all(*max_degree, Spaces::BOTH, &opts, cache.as_ref());
            for f in &out.failures {
                eprintln!("error: {f}");
            }
            let verdict = verify_reports(&out.reports, *max_degree);
            print!("{}", verdict.render());
            if !verdict.ok() || !out.failures.is_empty() {
                std::process::exit(1);
            }
        }
        Cmd::ExportMatrix { skeleton, r23, r1, degree, space, format, out, mode } => {
            check_degree(*degree)?;
            let case = CaseSpec::new((*skeleton).into(), (*r23).into(), (*r1).into());
            let matrix: SparseIntMatrix = match space {
                MatrixSpaceArg::W => weight_matrix(&case, *degree).matrix,
                MatrixSpaceArg::V => polyak_matrix(&case, *degree, (*mode).into()).matrix,
            };
            let file = File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
            let mut w = BufWriter::new(file);
            match format {
                MatrixFormatArg::Sms => linalg::io::export_sms(&matrix, &mut w)?,
                MatrixFormatArg::Mtx => linalg::io::export_matrix_market(&matrix, &mut w)?,
            }
            w.flush()?;
            eprintln!(
                "wrote {} x {} matrix ({} nonzeros) to {}",
                matrix.nrows(),
                matrix.ncols(),
                matrix.nnz(),
                out.display()
            );
        }
        Cmd::RankMatrix { input, format } => {
            let file = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
            let reader = BufReader::new(file);
            let matrix = match format {
                MatrixFormatArg::Sms => linalg::io::import_sms(reader)?,
                MatrixFormatArg::Mtx => linalg::io::import_matrix_market(reader)?,
            };
            let res = linalg::rank_consensus(&matrix, &primes, None)?;
            println!(
                "rank {} (primes {:?}, per-prime {:?}, consensus {})",
                res.rank, res.primes, res.per_prime, res.consensus
            );
        }
        Cmd::DumpDiagrams { skeleton, degree, signed } => {
            check_degree(*degree)?;
            for d in enumerate_diagrams((*skeleton).into(), *degree, *signed) {
                if *signed {
                    println!("{}", d.to_signed_text());
                } else {
                    println!("{d}");
                }
            }
        }
        Cmd::Manifest { skeleton, r23, r1, max_degree, mode, out } => {
            check_degree(*max_degree)?;
            let case = CaseSpec::new((*skeleton).into(), (*r23).into(), (*r1).into());
            let pm = polyak_matrix(&case, *max_degree, (*mode).into());
            let text = case_manifest(&case, *max_degree, (*mode).into(), &pm);
            match out {
                Some(path) => std::fs::write(path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}
