//! Cycle detection directly on the exponent matrix.
//!
//! A closed path `n_0 m_0 n_1 m_1 ... n_{k-1} m_{k-1} n_0` through the base
//! graph (columns `n_i`, rows `m_i`, with `m_i != m_{i+1}` and
//! `n_i != n_{i+1}` cyclically) lifts to a cycle of length `2k` exactly when
//! its alternating sum `sum_i (p[m_i][n_i] - p[m_i][n_{i+1}])` vanishes mod
//! `N`. For the convolutional interpretation the sum has to vanish over the
//! integers. Rows and columns may be revisited at non-adjacent positions.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentMatrix, Lifting};

pub const DEFAULT_GIRTH_CAP: usize = 12;

/// Closed alternating row/column path in the base graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleCandidate {
    /// `n_0 .. n_{k-1}`; the path closes back on `n_0`.
    pub cols: Vec<usize>,
    /// `m_0 .. m_{k-1}`; row `m_i` joins `n_i` to `n_{i+1}`.
    pub rows: Vec<usize>,
    pub sum: i64,
}

impl CycleCandidate {
    /// Builds a candidate and computes its alternating sum against `p`.
    pub fn new(p: &ExponentMatrix, cols: Vec<usize>, rows: Vec<usize>) -> Result<Self> {
        let k = cols.len();
        if k < 2 || rows.len() != k {
            return Err(Error::param("a cycle candidate needs k >= 2 matching rows and columns"));
        }
        for i in 0..k {
            let j = (i + 1) % k;
            if cols[i] >= p.cols() || rows[i] >= p.rows() {
                return Err(Error::param("cycle index out of range"));
            }
            if cols[i] == cols[j] || rows[i] == rows[j] {
                return Err(Error::param("consecutive rows and columns must differ"));
            }
        }
        let sum = alternating_sum(p, &cols, &rows);
        Ok(Self { cols, rows, sum })
    }

    /// Cycle length `2k`.
    pub fn len(&self) -> usize {
        2 * self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }
}

impl fmt::Display for CycleCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, m) in self.cols.iter().zip(&self.rows) {
            write!(f, "c{n} r{m} ")?;
        }
        write!(f, "c{} (sum {})", self.cols[0], self.sum)
    }
}

pub fn alternating_sum(p: &ExponentMatrix, cols: &[usize], rows: &[usize]) -> i64 {
    let k = cols.len();
    (0..k)
        .map(|i| p.get(rows[i], cols[i]) as i64 - p.get(rows[i], cols[(i + 1) % k]) as i64)
        .sum()
}

/// How a candidate behaves under a given lifting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleClass {
    /// The sum is non-zero modulo `N` (or over the integers for unbounded lifting).
    Absent,
    /// `|sum| = beta * N` with `beta > 0`: present at this `N` only by coincidence.
    Avoidable { beta: u64 },
    /// `sum = 0`: present for every lifting degree.
    StrictlyAvoidable,
}

impl CycleClass {
    pub fn of(sum: i64, lifting: Lifting) -> Self {
        if sum == 0 {
            return CycleClass::StrictlyAvoidable;
        }
        match lifting {
            Lifting::Finite(n) if sum.unsigned_abs().is_multiple_of(n) => {
                CycleClass::Avoidable { beta: sum.unsigned_abs() / n }
            }
            _ => CycleClass::Absent,
        }
    }

    pub fn is_present(self) -> bool {
        !matches!(self, CycleClass::Absent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleWitness {
    pub candidate: CycleCandidate,
    pub class: CycleClass,
}

impl CycleWitness {
    pub fn is_present(&self) -> bool {
        self.class.is_present()
    }

    pub fn len(&self) -> usize {
        self.candidate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidate.is_empty()
    }
}

/// Result of a capped girth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Girth {
    Exactly(usize),
    /// No cycle of length `<= cap`.
    GreaterThan(usize),
}

impl Girth {
    /// `true` when the girth is known to be at least `g`.
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Exactly(x) => x >= g,
            Girth::GreaterThan(cap) => cap + 2 >= g,
        }
    }

    pub fn value(self) -> Option<usize> {
        match self {
            Girth::Exactly(x) => Some(x),
            Girth::GreaterThan(_) => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Exactly(g) => write!(f, "{g}"),
            Girth::GreaterThan(cap) => write!(f, ">{cap}"),
        }
    }
}

fn check_enum_cap(max_len: usize) -> Result<()> {
    if !max_len.is_multiple_of(2) || !(4..=12).contains(&max_len) {
        return Err(Error::param(format!("cycle length cap must be even and in 4..=12, got {max_len}")));
    }
    Ok(())
}

fn check_girth_cap(cap: usize) -> Result<()> {
    if !cap.is_multiple_of(2) || cap < 4 {
        return Err(Error::param(format!("girth cap must be even and >= 4, got {cap}")));
    }
    Ok(())
}

/// Streams every cycle candidate of length `<= max_len`, shortest first, each
/// exactly once up to rotation and reflection, classified against the
/// matrix's lifting.
pub fn enumerate_cycles(p: &ExponentMatrix, max_len: usize) -> Result<CycleIter<'_>> {
    check_enum_cap(max_len)?;
    Ok(CycleIter::new(p, max_len / 2))
}

/// Number of present cycles per length, up to `max_len`.
pub fn cycle_counts(p: &ExponentMatrix, max_len: usize) -> Result<BTreeMap<usize, usize>> {
    let mut counts = BTreeMap::new();
    for w in enumerate_cycles(p, max_len)? {
        if w.is_present() {
            *counts.entry(w.len()).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Depth-first enumerator over closed paths with `n_0` the smallest column.
pub struct CycleIter<'a> {
    p: &'a ExponentMatrix,
    max_k: usize,
    k: usize,
    n0: usize,
    /// Position 0 is `n_0`; odd positions are rows, even positions columns.
    seq: Vec<usize>,
    assigned: Vec<bool>,
    depth: usize,
    done: bool,
}

impl<'a> CycleIter<'a> {
    fn new(p: &'a ExponentMatrix, max_k: usize) -> Self {
        let mut it = Self {
            p,
            max_k,
            k: 2,
            n0: 0,
            seq: Vec::new(),
            assigned: Vec::new(),
            depth: 1,
            done: p.cols() < 2 || p.rows() < 2,
        };
        it.reset();
        it
    }

    fn reset(&mut self) {
        self.seq = vec![0; 2 * self.k];
        self.seq[0] = self.n0;
        self.assigned = vec![false; 2 * self.k];
        self.assigned[0] = true;
        self.depth = 1;
    }

    fn valid(&self, pos: usize, v: usize) -> bool {
        let last = 2 * self.k - 1;
        if pos % 2 == 1 {
            if pos >= 3 && self.seq[pos - 2] == v {
                return false;
            }
            !(pos == last && self.seq[1] == v)
        } else {
            if v < self.n0 || self.seq[pos - 2] == v {
                return false;
            }
            !(pos == last - 1 && v == self.n0)
        }
    }

    fn is_canonical(&self) -> bool {
        let k = self.k;
        let seq = &self.seq;
        let cols = |i: usize| seq[2 * (i % k)];
        let rows = |i: usize| seq[2 * (i % k) + 1];
        for s in 0..k {
            if cols(s) != self.n0 {
                continue;
            }
            if s != 0 {
                let rot = (0..k).flat_map(|i| [cols(s + i), rows(s + i)]);
                if lex_less(rot, seq.iter().copied()) {
                    return false;
                }
            }
            // Reflection started at column n_s: n_s m_{s-1} n_{s-1} m_{s-2} ...
            let refl = (0..k).flat_map(|i| [cols(s + k - i), rows(s + 2 * k - 1 - i)]);
            if lex_less(refl, seq.iter().copied()) {
                return false;
            }
        }
        true
    }

    fn emit(&self) -> CycleWitness {
        let cols: Vec<usize> = self.seq.iter().step_by(2).copied().collect();
        let rows: Vec<usize> = self.seq.iter().skip(1).step_by(2).copied().collect();
        let sum = alternating_sum(self.p, &cols, &rows);
        CycleWitness { class: CycleClass::of(sum, self.p.lifting()), candidate: CycleCandidate { cols, rows, sum } }
    }
}

fn lex_less(a: impl Iterator<Item = usize>, b: impl Iterator<Item = usize>) -> bool {
    a.cmp(b) == std::cmp::Ordering::Less
}

impl Iterator for CycleIter<'_> {
    type Item = CycleWitness;

    fn next(&mut self) -> Option<CycleWitness> {
        while !self.done {
            if self.depth == 0 {
                self.n0 += 1;
                if self.n0 + 1 >= self.p.cols() {
                    self.n0 = 0;
                    self.k += 1;
                    if self.k > self.max_k {
                        self.done = true;
                        return None;
                    }
                }
                self.reset();
                continue;
            }
            let pos = self.depth;
            let limit = if pos % 2 == 1 { self.p.rows() } else { self.p.cols() };
            let start = if self.assigned[pos] { self.seq[pos] + 1 } else { 0 };
            match (start..limit).find(|&v| self.valid(pos, v)) {
                Some(v) => {
                    self.seq[pos] = v;
                    self.assigned[pos] = true;
                    if pos == 2 * self.k - 1 {
                        if self.is_canonical() {
                            return Some(self.emit());
                        }
                    } else {
                        self.depth += 1;
                        self.assigned[self.depth] = false;
                    }
                }
                None => {
                    self.assigned[pos] = false;
                    self.depth -= 1;
                }
            }
        }
        None
    }
}

/// Which closed paths a [`CycleSearch`] explores.
#[derive(Debug, Clone, Copy)]
enum Start {
    /// `n_0` is the smallest column on the path; every path is seen up to rotation.
    MinColumn,
    /// The path passes through this column (taken as `n_0`).
    Through(usize),
}

/// Existence-only search for present cycles of one exact length, restricted to
/// the first `col_limit` columns. Used by the girth computation and by the
/// greedy designer.
pub(crate) struct CycleSearch<'a> {
    p: &'a ExponentMatrix,
    modulus: Option<i64>,
    col_limit: usize,
}

impl<'a> CycleSearch<'a> {
    pub(crate) fn new(p: &'a ExponentMatrix) -> Self {
        Self::with_col_limit(p, p.cols())
    }

    pub(crate) fn with_col_limit(p: &'a ExponentMatrix, col_limit: usize) -> Self {
        Self { p, modulus: p.lifting().finite().map(|n| n as i64), col_limit: col_limit.min(p.cols()) }
    }

    #[inline]
    fn closes(&self, sum: i64) -> bool {
        match self.modulus {
            Some(n) => sum % n == 0,
            None => sum == 0,
        }
    }

    #[inline]
    fn entry(&self, r: usize, c: usize) -> i64 {
        self.p.get(r, c) as i64
    }

    /// First present `2k`-cycle whose starting column is `n0`.
    fn find_from(&self, k: usize, n0: usize, min_col: usize) -> Option<CycleCandidate> {
        let mut cols = vec![n0; k];
        let mut rows = vec![0; k];
        for m0 in 0..self.p.rows() {
            rows[0] = m0;
            if self.dfs(k, 1, 0, min_col, &mut cols, &mut rows) {
                let sum = alternating_sum(self.p, &cols, &rows);
                return Some(CycleCandidate { cols, rows, sum });
            }
        }
        None
    }

    /// `cols[..i]` and `rows[..i]` are fixed; choose `n_i` then `m_i`.
    fn dfs(&self, k: usize, i: usize, sum: i64, min_col: usize, cols: &mut [usize], rows: &mut [usize]) -> bool {
        let prev_row = rows[i - 1];
        let prev_col = cols[i - 1];
        for n in min_col..self.col_limit {
            if n == prev_col {
                continue;
            }
            let s = sum + self.entry(prev_row, prev_col) - self.entry(prev_row, n);
            let s = match self.modulus {
                Some(m) => s % m,
                None => s,
            };
            cols[i] = n;
            if i == k - 1 {
                if n == cols[0] {
                    continue;
                }
                for m in 0..self.p.rows() {
                    if m == prev_row || m == rows[0] {
                        continue;
                    }
                    if self.closes(s + self.entry(m, n) - self.entry(m, cols[0])) {
                        rows[i] = m;
                        return true;
                    }
                }
            } else {
                for m in 0..self.p.rows() {
                    if m == prev_row {
                        continue;
                    }
                    rows[i] = m;
                    if self.dfs(k, i + 1, s, min_col, cols, rows) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn find(&self, k: usize, start: Start) -> Option<CycleCandidate> {
        match start {
            Start::MinColumn => (0..self.col_limit)
                .into_par_iter()
                .filter_map(|n0| self.find_from(k, n0, n0))
                .find_first(|_| true),
            Start::Through(c) => self.find_from(k, c, 0),
        }
    }

    /// Shortest present cycle of length `<= cap` (or `< cap` when `strict`).
    fn shortest(&self, cap: usize, start: Start) -> Option<CycleCandidate> {
        if self.p.rows() < 2 || self.col_limit < 2 {
            return None;
        }
        (2..=cap / 2).find_map(|k| self.find(k, start))
    }

    /// Shortest present cycle through column `col`, of length `<= cap`.
    pub(crate) fn shortest_through(&self, col: usize, cap: usize) -> Option<CycleCandidate> {
        self.shortest(cap, Start::Through(col))
    }
}

/// Girth of the code described by `p`, truncated at `cap`.
///
/// For finite lifting every present cycle counts; for unbounded lifting only
/// sums that vanish over the integers do, which is the convolutional girth.
pub fn girth(p: &ExponentMatrix, cap: usize) -> Result<Girth> {
    check_girth_cap(cap)?;
    Ok(match CycleSearch::new(p).shortest(cap, Start::MinColumn) {
        Some(c) => Girth::Exactly(c.len()),
        None => Girth::GreaterThan(cap),
    })
}

/// A shortest present cycle of length `<= cap`, if any.
pub fn shortest_cycle(p: &ExponentMatrix, cap: usize) -> Result<Option<CycleWitness>> {
    check_girth_cap(cap)?;
    Ok(CycleSearch::new(p).shortest(cap, Start::MinColumn).map(|candidate| CycleWitness {
        class: CycleClass::of(candidate.sum, p.lifting()),
        candidate,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[u64]], lifting: Lifting) -> ExponentMatrix {
        ExponentMatrix::from_rows(rows, lifting).unwrap()
    }

    fn girth10_n4() -> ExponentMatrix {
        mat(&[&[0, 0, 0, 0], &[0, 1, 3, 24], &[0, 27, 7, 19]], Lifting::Finite(37))
    }

    #[test]
    fn all_zero_2x2_has_one_strict_four_cycle() {
        let p = mat(&[&[0, 0], &[0, 0]], Lifting::Finite(5));
        let all: Vec<_> = enumerate_cycles(&p, 4).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].candidate.sum, 0);
        assert_eq!(all[0].class, CycleClass::StrictlyAvoidable);
        assert!(all[0].is_present());
    }

    #[test]
    fn all_zero_2x3_one_four_cycle_per_column_pair() {
        let p = mat(&[&[0, 0, 0], &[0, 0, 0]], Lifting::Finite(5));
        let fours = enumerate_cycles(&p, 4).unwrap().filter(|w| w.len() == 4).count();
        assert_eq!(fours, 3);
    }

    #[test]
    fn girth10_n4_has_nothing_below_ten() {
        let p = girth10_n4();
        assert!(enumerate_cycles(&p, 8).unwrap().all(|w| !w.is_present()));
        assert_eq!(girth(&p, 12).unwrap(), Girth::Exactly(10));
    }

    #[test]
    fn girth12_n4_has_girth_twelve() {
        let p = mat(&[&[0, 0, 0, 0], &[0, 1, 3, 13], &[0, 9, 27, 44]], Lifting::Finite(73));
        assert_eq!(girth(&p, 12).unwrap(), Girth::Exactly(12));
    }

    #[test]
    fn two_by_two_with_residue_one_exceeds_cap_four() {
        let p = mat(&[&[0, 0], &[0, 1]], Lifting::Finite(2));
        assert_eq!(girth(&p, 4).unwrap(), Girth::GreaterThan(4));
        // The 4-cycle walked twice has sum 2 = 1 * N, so an 8-cycle exists.
        assert_eq!(girth(&p, 12).unwrap(), Girth::Exactly(8));
    }

    #[test]
    fn cc_a4_convolutional_girth_ten() {
        let p = mat(&[&[6, 11, 0, 9], &[11, 2, 0, 11], &[4, 1, 11, 0]], Lifting::Unbounded);
        assert_eq!(girth(&p, 12).unwrap(), Girth::Exactly(10));
    }

    #[test]
    fn classification() {
        assert_eq!(CycleClass::of(0, Lifting::Finite(7)), CycleClass::StrictlyAvoidable);
        assert_eq!(CycleClass::of(-14, Lifting::Finite(7)), CycleClass::Avoidable { beta: 2 });
        assert_eq!(CycleClass::of(3, Lifting::Finite(7)), CycleClass::Absent);
        assert_eq!(CycleClass::of(7, Lifting::Unbounded), CycleClass::Absent);
        assert_eq!(CycleClass::of(0, Lifting::Unbounded), CycleClass::StrictlyAvoidable);
    }

    #[test]
    fn enumeration_rejects_bad_caps() {
        let p = girth10_n4();
        assert!(enumerate_cycles(&p, 7).is_err());
        assert!(enumerate_cycles(&p, 2).is_err());
        assert!(enumerate_cycles(&p, 14).is_err());
        assert!(girth(&p, 5).is_err());
    }

    #[test]
    fn enumeration_has_no_duplicates_up_to_symmetry() {
        let p = mat(&[&[0, 1, 2, 4], &[3, 0, 5, 1], &[2, 2, 0, 6]], Lifting::Finite(7));
        let all: Vec<_> = enumerate_cycles(&p, 8).unwrap().collect();
        let mut keys = std::collections::HashSet::new();
        for w in &all {
            let c = &w.candidate;
            let k = c.cols.len();
            // Every rotation/reflection maps to the same canonical key.
            let mut variants = Vec::new();
            for s in 0..k {
                variants.push((0..k).flat_map(|i| [c.cols[(s + i) % k], c.rows[(s + i) % k]]).collect::<Vec<_>>());
                variants.push(
                    (0..k).flat_map(|i| [c.cols[(s + k - i) % k], c.rows[(s + 2 * k - 1 - i) % k]]).collect(),
                );
            }
            let key = variants.into_iter().min().unwrap();
            assert!(keys.insert(key), "duplicate cycle {c}");
        }
    }

    #[test]
    fn candidate_sum_matches_definition() {
        let p = girth10_n4();
        let c = CycleCandidate::new(&p, vec![1, 2], vec![1, 2]).unwrap();
        // p[1][1] - p[1][2] + p[2][2] - p[2][1] = 1 - 3 + 7 - 27
        assert_eq!(c.sum, -22);
        assert!(CycleCandidate::new(&p, vec![1, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn shortest_cycle_witness_is_present() {
        let p = mat(&[&[0, 0, 0], &[0, 1, 2], &[0, 2, 4]], Lifting::Finite(5));
        let w = shortest_cycle(&p, 12).unwrap().unwrap();
        assert!(w.is_present());
        assert_eq!(Girth::Exactly(w.len()), girth(&p, 12).unwrap());
    }
}
