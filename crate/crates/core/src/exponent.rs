//! Exponent matrices of CPM-based QC-LDPC block codes and of monomial
//! SC-LDPC convolutional codes, plus their plain-text file format.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment lines start with '#'
//! 3 4 37
//! 0 0 0 0
//! 0 1 3 24
//! 0 27 7 19
//! ```
//!
//! The header is `rows cols N`, where `N` is a positive lifting degree or the
//! literal `inf` for the convolutional interpretation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lifting degree of an exponent matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lifting {
    /// Block code with `N x N` circulant permutation blocks.
    Finite(u64),
    /// Convolutional interpretation: entries are monomial degrees, never reduced.
    Unbounded,
}

impl Lifting {
    pub fn finite(self) -> Option<u64> {
        match self {
            Lifting::Finite(n) => Some(n),
            Lifting::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Lifting::Unbounded)
    }
}

impl fmt::Display for Lifting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lifting::Finite(n) => write!(f, "{n}"),
            Lifting::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Lifting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Lifting::Unbounded);
        }
        match s.parse::<u64>() {
            Ok(0) => Err(Error::param("lifting degree must be positive")),
            Ok(n) => Ok(Lifting::Finite(n)),
            Err(_) => Err(Error::param(format!("bad lifting degree {s:?}"))),
        }
    }
}

/// Row-major matrix of non-negative shift values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
    lifting: Lifting,
}

impl ExponentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u64>, lifting: Lifting) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("exponent matrix needs at least one row and one column"));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, actual: entries.len() });
        }
        if let Lifting::Finite(n) = lifting {
            if let Some(bad) = entries.iter().find(|&&p| p >= n) {
                return Err(Error::param(format!("shift {bad} out of range for N = {n}")));
            }
        }
        Ok(Self { rows, cols, entries, lifting })
    }

    /// Builds from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R], lifting: Lifting) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::param(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            entries.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, entries, lifting)
    }

    pub fn zeros(rows: usize, cols: usize, lifting: Lifting) -> Result<Self> {
        Self::new(rows, cols, vec![0; rows * cols], lifting)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn lifting(&self) -> Lifting {
        self.lifting
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn max_entry(&self) -> u64 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn min_entry(&self) -> u64 {
        self.entries.iter().copied().min().unwrap_or(0)
    }

    /// Same entries, different lifting. Fails if an entry does not fit `lifting`.
    pub fn with_lifting(&self, lifting: Lifting) -> Result<Self> {
        Self::new(self.rows, self.cols, self.entries.clone(), lifting)
    }

    /// Adds a constant to every entry of one row, reducing mod `N` for finite
    /// lifting. Negative offsets that would underflow an unbounded matrix are
    /// rejected.
    pub fn offset_row(&self, row: usize, delta: i64) -> Result<Self> {
        self.offset_where(delta, |r, _| r == row)
    }

    pub fn offset_col(&self, col: usize, delta: i64) -> Result<Self> {
        self.offset_where(delta, |_, c| c == col)
    }

    fn offset_where(&self, delta: i64, pick: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut entries = self.entries.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !pick(r, c) {
                    continue;
                }
                let e = &mut entries[r * self.cols + c];
                let v = *e as i64 + delta;
                *e = match self.lifting {
                    Lifting::Finite(n) => v.rem_euclid(n as i64) as u64,
                    Lifting::Unbounded if v < 0 => {
                        return Err(Error::param("offset makes an entry negative"))
                    }
                    Lifting::Unbounded => v as u64,
                };
            }
        }
        Self::new(self.rows, self.cols, entries, self.lifting)
    }

    /// Serializes to the text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.lifting);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Commas are accepted as separators so comma-separated
    /// listings can be pasted verbatim.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: hline, msg: "header must be `rows cols N`".into() });
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: hline, msg: format!("bad dimension {s:?}") })
        };
        let rows = parse_dim(fields[0])?;
        let cols = parse_dim(fields[1])?;
        let lifting: Lifting =
            fields[2].parse().map_err(|e: Error| Error::Parse { line: hline, msg: e.to_string() })?;

        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or(Error::Parse { line: hline, msg: format!("missing row {r}") })?;
            let before = entries.len();
            for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let v = tok
                    .parse::<u64>()
                    .map_err(|_| Error::Parse { line: ln, msg: format!("bad entry {tok:?}") })?;
                entries.push(v);
            }
            if entries.len() - before != cols {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {cols} entries, found {}", entries.len() - before),
                });
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing data after last row".into() });
        }
        Self::new(rows, cols, entries, lifting)
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ExponentMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
