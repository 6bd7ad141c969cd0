//! SMS and Matrix Market coordinate formats, for interchange with external
//! exact linear algebra packages. Both round-trip bit-exactly modulo
//! whitespace normalization.

use std::io::{BufRead, Write};

use thiserror::Error;

use super::SparseIntMatrix;

#[derive(Error, Debug)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// SMS sparse format: header `nrows ncols M`, 1-based `i j v` triplets,
/// `0 0 0` terminator.
pub fn export_sms<W: Write>(m: &SparseIntMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{} {} M", m.nrows(), m.ncols())?;
    for (i, j, v) in m.entries() {
        writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
    }
    writeln!(w, "0 0 0")?;
    Ok(())
}

struct Assembler {
    nrows: usize,
    ncols: usize,
    triplets: Vec<(usize, u32, i64)>,
}

impl Assembler {
    fn entry(&mut self, line: usize, i: i64, j: i64, v: i64) -> Result<(), FormatError> {
        if i < 1 || i as usize > self.nrows {
            return Err(parse_err(line, format!("row index {i} out of range (1-based)")));
        }
        if j < 1 || j as usize > self.ncols {
            return Err(parse_err(line, format!("column index {j} out of range (1-based)")));
        }
        self.triplets.push((i as usize - 1, j as u32 - 1, v));
        Ok(())
    }

    fn finish(self) -> SparseIntMatrix {
        let mut rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.nrows];
        for (i, j, v) in self.triplets {
            rows[i].push((j, v));
        }
        SparseIntMatrix::with_rows(self.ncols, rows)
    }
}

fn split3(line: usize, s: &str) -> Result<(i64, i64, i64), FormatError> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<i64, FormatError> {
        it.next()
            .ok_or_else(|| parse_err(line, "expected three integers"))?
            .parse::<i64>()
            .map_err(|e| parse_err(line, format!("bad integer: {e}")))
    };
    let t = (next()?, next()?, next()?);
    if it.next().is_some() {
        return Err(parse_err(line, "trailing tokens after triplet"));
    }
    Ok(t)
}

pub fn import_sms<R: BufRead>(r: R) -> Result<SparseIntMatrix, FormatError> {
    let mut lines = r.lines().enumerate();
    let (lineno, header) = loop {
        match lines.next() {
            Some((n, l)) => {
                let l = l?;
                if !l.trim().is_empty() {
                    break (n + 1, l);
                }
            }
            None => return Err(parse_err(1, "missing SMS header")),
        }
    };
    let mut it = header.split_whitespace();
    let nrows: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(lineno, "bad row count in header"))?;
    let ncols: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(lineno, "bad column count in header"))?;
    match it.next() {
        Some("M") => {}
        other => return Err(parse_err(lineno, format!("expected field marker 'M', got {other:?}"))),
    }
    let mut asm = Assembler { nrows, ncols, triplets: Vec::new() };
    for (n, line) in lines {
        let line = line?;
        let lineno = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (i, j, v) = split3(lineno, &line)?;
        if (i, j, v) == (0, 0, 0) {
            return Ok(asm.finish());
        }
        asm.entry(lineno, i, j, v)?;
    }
    Err(parse_err(0, "missing '0 0 0' terminator"))
}

const MM_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

/// Matrix Market coordinate format, integer general.
pub fn export_matrix_market<W: Write>(m: &SparseIntMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{MM_HEADER}")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.entries() {
        writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn import_matrix_market<R: BufRead>(r: R) -> Result<SparseIntMatrix, FormatError> {
    let mut lines = r.lines().enumerate();
    let (lineno, header) = match lines.next() {
        Some((n, l)) => (n + 1, l?),
        None => return Err(parse_err(1, "empty file")),
    };
    if header.trim() != MM_HEADER {
        return Err(parse_err(lineno, format!("expected header {MM_HEADER:?}")));
    }
    let mut size_line = None;
    for (n, l) in lines.by_ref() {
        let l = l?;
        if l.starts_with('%') || l.trim().is_empty() {
            continue;
        }
        size_line = Some((n + 1, l));
        break;
    }
    let (lineno, size) = size_line.ok_or_else(|| parse_err(0, "missing size line"))?;
    let (nr, nc, nnz) = split3(lineno, &size)?;
    if nr < 0 || nc < 0 || nnz < 0 {
        return Err(parse_err(lineno, "negative size field"));
    }
    let mut asm = Assembler {
        nrows: nr as usize,
        ncols: nc as usize,
        triplets: Vec::new(),
    };
    let mut remaining = nnz;
    for (n, l) in lines {
        let l = l?;
        let lineno = n + 1;
        if l.trim().is_empty() {
            continue;
        }
        if remaining == 0 {
            return Err(parse_err(lineno, "more entries than declared"));
        }
        let (i, j, v) = split3(lineno, &l)?;
        asm.entry(lineno, i, j, v)?;
        remaining -= 1;
    }
    if remaining != 0 {
        return Err(parse_err(0, format!("{remaining} entries missing")));
    }
    Ok(asm.finish())
}
