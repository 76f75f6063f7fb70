//! Monomial SC-LDPC convolutional codes and their link to QC block codes.
//!
//! A `c x a` exponent matrix read with unbounded lifting describes the
//! symbolic matrix `H(x)` with `h_ij(x) = x^{p_ij}`. Block `H_m` of the
//! semi-infinite parity-check matrix holds a 1 at `(i, j)` exactly when
//! `p_ij - min(P) = m`, and block row `r`, block column `s` of the
//! semi-infinite matrix is `H_{r - s}` (zero outside `0..=m_h`).

use std::collections::BTreeSet;
use std::ops::Range;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cycles::{girth, Girth};
use crate::error::{Error, Result};
use crate::exponent::{ExponentMatrix, Lifting};
use crate::parity::ParityCheckMatrix;

/// Time-invariant monomial convolutional code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionalCode {
    base: ExponentMatrix,
}

impl ConvolutionalCode {
    /// Wraps an exponent matrix, forgetting any finite lifting.
    pub fn new(base: &ExponentMatrix) -> Result<Self> {
        Ok(Self { base: base.with_lifting(Lifting::Unbounded)? })
    }

    pub fn base(&self) -> &ExponentMatrix {
        &self.base
    }

    /// Number of parity checks per block, `c`.
    pub fn c(&self) -> usize {
        self.base.rows()
    }

    /// Number of symbols per block, `a`.
    pub fn a(&self) -> usize {
        self.base.cols()
    }

    /// Syndrome former memory order: largest spread between two entries.
    pub fn memory(&self) -> u64 {
        self.base.max_entry() - self.base.min_entry()
    }

    /// Syndrome former constraint length `(m_h + 1) a`.
    pub fn constraint_length(&self) -> u64 {
        (self.memory() + 1) * self.a() as u64
    }

    /// Asymptotic rate `(a - c) / a`.
    pub fn rate(&self) -> Rational64 {
        Rational64::new(self.a() as i64 - self.c() as i64, self.a() as i64)
    }

    /// Delay of the 1 contributed by `(i, j)`, i.e. the index of the band block holding it.
    #[inline]
    pub fn delay(&self, i: usize, j: usize) -> usize {
        (self.base.get(i, j) - self.base.min_entry()) as usize
    }

    /// Convolutional girth: only integer-zero alternating sums count.
    pub fn girth(&self, cap: usize) -> Result<Girth> {
        girth(&self.base, cap)
    }
}

/// `c x a` grid of monomial-degree sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BTreeSet<u64>>,
}

impl SymbolicMatrix {
    pub fn get(&self, i: usize, j: usize) -> &BTreeSet<u64> {
        &self.entries[i * self.cols + j]
    }

    pub fn max_degree(&self) -> u64 {
        self.entries.iter().filter_map(|s| s.last().copied()).max().unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.entries.iter().all(|s| s.len() == 1)
    }

    /// Memory order: spread of all degrees present.
    pub fn memory(&self) -> u64 {
        let min = self.entries.iter().filter_map(|s| s.first().copied()).min().unwrap_or(0);
        self.max_degree() - min
    }
}

/// Entry `(i, j)` becomes the singleton `{p_ij}`.
pub fn to_symbolic(p: &ExponentMatrix) -> SymbolicMatrix {
    SymbolicMatrix {
        rows: p.rows(),
        cols: p.cols(),
        entries: p.entries().iter().map(|&e| BTreeSet::from([e])).collect(),
    }
}

/// Dense `c x a` 0/1 block.
pub type BinaryBlock = Vec<Vec<u8>>;

/// The `m_h + 1` band blocks `H_0 .. H_{m_h}`.
pub fn band_blocks(code: &ConvolutionalCode) -> Vec<BinaryBlock> {
    let mut blocks = vec![vec![vec![0u8; code.a()]; code.c()]; code.memory() as usize + 1];
    for i in 0..code.c() {
        for j in 0..code.a() {
            blocks[code.delay(i, j)][i][j] = 1;
        }
    }
    blocks
}

/// Parity-check matrix of a chain truncated to `chain_len` block positions:
/// block rows and block columns `0..chain_len` of the semi-infinite matrix.
pub fn chain_matrix(code: &ConvolutionalCode, chain_len: usize) -> Result<ParityCheckMatrix> {
    if chain_len == 0 {
        return Err(Error::param("chain length must be positive"));
    }
    band_submatrix(code, 0..chain_len, 0..chain_len)
}

/// A finite chain whose last `m_h` block positions carry known zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminatedChain<'c> {
    code: &'c ConvolutionalCode,
    len: usize,
}

impl<'c> TerminatedChain<'c> {
    /// Needs at least one information-carrying block before the tail.
    pub fn new(code: &'c ConvolutionalCode, len: usize) -> Result<Self> {
        if len as u64 <= code.memory() {
            return Err(Error::param(format!(
                "chain of {len} blocks leaves no room before a zero tail of {} blocks",
                code.memory()
            )));
        }
        Ok(Self { code, len })
    }

    pub fn code(&self) -> &'c ConvolutionalCode {
        self.code
    }

    /// Total block positions, tail included.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Block positions not forced to zero.
    pub fn data_blocks(&self) -> usize {
        self.len - self.code.memory() as usize
    }

    /// Chain symbols fixed to zero by the termination.
    pub fn tail_symbols(&self) -> Range<usize> {
        self.data_blocks() * self.code.a()..self.len * self.code.a()
    }

    pub fn symbols(&self) -> usize {
        self.len * self.code.a()
    }

    pub fn matrix(&self) -> Result<ParityCheckMatrix> {
        chain_matrix(self.code, self.len)
    }

    /// Overwrites the tail LLRs with `+clip` (certain zeros).
    pub fn terminate<F: Copy>(&self, llr: &mut [F], clip: F) {
        for x in &mut llr[self.tail_symbols()] {
            *x = clip;
        }
    }
}

fn band_submatrix(code: &ConvolutionalCode, block_rows: Range<usize>, block_cols: Range<usize>) -> Result<ParityCheckMatrix> {
    let (c, a) = (code.c(), code.a());
    let mut entries = Vec::new();
    for s in block_cols.clone() {
        for i in 0..c {
            for j in 0..a {
                let r = s + code.delay(i, j);
                if block_rows.contains(&r) {
                    entries.push(((r - block_rows.start) * c + i, (s - block_cols.start) * a + j));
                }
            }
        }
    }
    ParityCheckMatrix::from_entries(block_rows.len() * c, block_cols.len() * a, entries)
}

/// One sliding-window decoding problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMatrix {
    /// Block rows and block columns `first_block .. first_block + blocks`,
    /// renumbered from zero.
    pub h: ParityCheckMatrix,
    pub first_block: usize,
    pub blocks: usize,
    /// Window-local columns whose decisions this position outputs.
    pub target_cols: Range<usize>,
    /// For every window row, the absolute chain columns before the window it
    /// also checks. These symbols are already decided.
    pub past: Vec<Vec<usize>>,
}

impl WindowMatrix {
    /// Window rows that touch already-decided symbols.
    pub fn rows_with_past(&self) -> impl Iterator<Item = usize> + '_ {
        self.past.iter().enumerate().filter(|(_, p)| !p.is_empty()).map(|(r, _)| r)
    }

    /// Absolute chain column of window column `col`.
    pub fn chain_col(&self, col: usize, a: usize) -> usize {
        self.first_block * a + col
    }
}

/// The `W c x W a` window at block position `t` of a chain of `chain_len` blocks.
pub fn window_matrix(code: &ConvolutionalCode, blocks: usize, t: usize, chain_len: usize) -> Result<WindowMatrix> {
    if blocks == 0 {
        return Err(Error::param("window must span at least one block"));
    }
    if t + blocks > chain_len {
        return Err(Error::param(format!(
            "window of {blocks} blocks at position {t} exceeds chain of {chain_len} blocks"
        )));
    }
    let (c, a) = (code.c(), code.a());
    let h = band_submatrix(code, t..t + blocks, t..t + blocks)?;
    let mut past = vec![Vec::new(); blocks * c];
    for r in t..t + blocks {
        for i in 0..c {
            for j in 0..a {
                let d = code.delay(i, j);
                if r >= d && r - d < t {
                    past[(r - t) * c + i].push((r - d) * a + j);
                }
            }
        }
    }
    for p in &mut past {
        p.sort_unstable();
    }
    Ok(WindowMatrix { h, first_block: t, blocks, target_cols: 0..a, past })
}

/// Reads a block code's exponent matrix as a convolutional code.
pub fn unwrap_qc(p: &ExponentMatrix) -> Result<ConvolutionalCode> {
    if p.lifting().is_unbounded() {
        return Err(Error::param("unwrapping expects a finite-lifting block code"));
    }
    ConvolutionalCode::new(p)
}

/// Offsets found by [`reduce_memory`]: entry `(i, j)` moved by `row[i] + col[j]`
/// and then shifted so the smallest entry is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryReduction {
    pub code: ConvolutionalCode,
    pub row_offsets: Vec<i64>,
    pub col_offsets: Vec<i64>,
}

/// Minimizes the memory order over integer row and column offsets.
///
/// Adding `r_i` to row `i` and `k_j` to column `j` leaves every alternating
/// sum unchanged, so the girth is preserved. The smallest spread `D` for
/// which `0 <= p_ij + r_i + k_j <= D` is feasible is a system of difference
/// constraints (with `w_j = -k_j`), solved by Bellman-Ford inside a binary
/// search on `D`. The result is optimal over all offsets.
pub fn reduce_memory(code: &ConvolutionalCode) -> MemoryReduction {
    let (c, a) = (code.c(), code.a());
    let p = code.base();
    let min = p.min_entry() as i64;
    let q = |i: usize, j: usize| p.get(i, j) as i64 - min;

    let solve = |d: i64| -> Option<Vec<i64>> {
        // Nodes 0..c are rows (r_i), c..c+a are columns (w_j).
        // w_j - r_i <= q_ij and r_i - w_j <= d - q_ij.
        let mut edges = Vec::with_capacity(2 * c * a);
        for i in 0..c {
            for j in 0..a {
                edges.push((i, c + j, q(i, j)));
                edges.push((c + j, i, d - q(i, j)));
            }
        }
        let nodes = c + a;
        let mut dist = vec![0i64; nodes];
        for round in 0..=nodes {
            let mut changed = false;
            for &(u, v, w) in &edges {
                if dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
            }
            if !changed {
                return Some(dist);
            }
            if round == nodes {
                return None;
            }
        }
        None
    };

    let (mut lo, mut hi) = (0i64, code.memory() as i64);
    let mut best = solve(hi).expect("current offsets are feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match solve(mid) {
            Some(sol) => {
                hi = mid;
                best = sol;
            }
            None => lo = mid + 1,
        }
    }

    let row_offsets: Vec<i64> = best[..c].to_vec();
    let col_offsets: Vec<i64> = best[c..].iter().map(|w| -w).collect();
    let mut shifted: Vec<i64> =
        (0..c).flat_map(|i| (0..a).map(move |j| (i, j))).map(|(i, j)| q(i, j) + row_offsets[i] + col_offsets[j]).collect();
    let shift = shifted.iter().copied().min().unwrap_or(0);
    for v in &mut shifted {
        *v -= shift;
    }
    let reduced = ExponentMatrix::new(c, a, shifted.iter().map(|&v| v as u64).collect(), Lifting::Unbounded)
        .expect("shifted entries are non-negative");
    let candidate = ConvolutionalCode { base: reduced };
    if candidate.memory() < code.memory() {
        let row_offsets = row_offsets.iter().map(|r| r - shift - min).collect();
        MemoryReduction { code: candidate, row_offsets, col_offsets }
    } else {
        // No spread improvement: keep the input, only shifted to start at zero.
        let normalized = ExponentMatrix::new(c, a, p.entries().iter().map(|&x| x - min as u64).collect(), Lifting::Unbounded)
            .expect("non-negative after removing the minimum");
        MemoryReduction { code: ConvolutionalCode { base: normalized }, row_offsets: vec![-min; c], col_offsets: vec![0; a] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_cycles;

    fn conv(rows: &[&[u64]]) -> ConvolutionalCode {
        ConvolutionalCode::new(&ExponentMatrix::from_rows(rows, Lifting::Unbounded).unwrap()).unwrap()
    }

    fn cc_c3_g10_a4() -> ConvolutionalCode {
        conv(&[&[6, 11, 0, 9], &[11, 2, 0, 11], &[4, 1, 11, 0]])
    }

    #[test]
    fn symbolic_forms() {
        let s = to_symbolic(&ExponentMatrix::from_rows(&[[0u64]], Lifting::Unbounded).unwrap());
        assert_eq!(s.get(0, 0), &BTreeSet::from([0]));
        let s = to_symbolic(cc_c3_g10_a4().base());
        assert!(s.is_monomial());
        assert_eq!((s.max_degree(), s.memory()), (11, 11));
        let s = to_symbolic(&ExponentMatrix::from_rows(&[[0u64, 1], [2, 0]], Lifting::Unbounded).unwrap());
        assert_eq!(s.memory(), 2);
    }

    #[test]
    fn code_parameters() {
        let code = cc_c3_g10_a4();
        assert_eq!(code.memory(), 11);
        assert_eq!(code.constraint_length(), 48);
        assert_eq!(code.rate(), Rational64::new(1, 4));
    }

    #[test]
    fn band_blocks_small() {
        assert_eq!(band_blocks(&conv(&[&[0]])), vec![vec![vec![1]]]);
        assert_eq!(band_blocks(&conv(&[&[0, 1]])), vec![vec![vec![1, 0]], vec![vec![0, 1]]]);
    }

    #[test]
    fn band_blocks_monomial_mass() {
        let blocks = band_blocks(&cc_c3_g10_a4());
        assert_eq!(blocks.len(), 12);
        let ones: usize = blocks.iter().flatten().flatten().map(|&b| b as usize).sum();
        assert_eq!(ones, 12);
    }

    #[test]
    fn trivial_window() {
        let w = window_matrix(&conv(&[&[0]]), 1, 0, 1).unwrap();
        assert_eq!(w.h.to_dense(), vec![vec![1]]);
        assert!(window_matrix(&conv(&[&[0]]), 2, 0, 1).is_err());
        assert!(window_matrix(&conv(&[&[0]]), 0, 0, 1).is_err());
    }

    #[test]
    fn full_band_window_has_complete_first_rows() {
        let code = cc_c3_g10_a4();
        let w = window_matrix(&code, 12, 0, 40).unwrap();
        // The first block row holds only H_0 entries; all lie inside the window.
        assert!(w.past.iter().all(Vec::is_empty));
        // Row i of the last block row carries the full row weight a.
        for i in 0..3 {
            assert_eq!(w.h.row_weight(11 * 3 + i), 4);
        }
        let later = window_matrix(&code, 12, 20, 40).unwrap();
        assert!(later.rows_with_past().count() > 0);
        for (r, cols) in later.past.iter().enumerate() {
            assert_eq!(later.h.row_weight(r) + cols.len(), 4);
        }
    }

    #[test]
    fn windows_tile_the_chain() {
        let code = conv(&[&[0, 2, 1], &[3, 0, 2]]);
        let len = 10;
        let full = chain_matrix(&code, len).unwrap();
        let w = code.memory() as usize + 1;
        let mut seen = std::collections::BTreeSet::new();
        for t in 0..=len - w {
            let win = window_matrix(&code, w, t, len).unwrap();
            for (r, cidx) in win.h.entries() {
                seen.insert((r + t * code.c(), cidx + t * code.a()));
            }
            for (r, cols) in win.past.iter().enumerate() {
                for &cidx in cols {
                    seen.insert((r + t * code.c(), cidx));
                }
            }
        }
        let want: std::collections::BTreeSet<_> = full.entries().collect();
        assert_eq!(seen, want);
    }

    #[test]
    fn unwrap_block_code() {
        let p = ExponentMatrix::from_rows(&[[0u64, 0, 0, 0], [0, 1, 3, 24], [0, 27, 7, 19]], Lifting::Finite(37))
            .unwrap();
        let code = unwrap_qc(&p).unwrap();
        assert_eq!(code.memory(), 27);
        assert!(code.girth(12).unwrap().at_least(10));

        let zero = unwrap_qc(&ExponentMatrix::zeros(2, 3, Lifting::Finite(5)).unwrap()).unwrap();
        assert_eq!(zero.memory(), 0);
        assert_eq!(zero.girth(12).unwrap(), Girth::Exactly(4));

        let small = unwrap_qc(&ExponentMatrix::from_rows(&[[0u64, 0], [0, 1]], Lifting::Finite(2)).unwrap()).unwrap();
        assert_eq!(small.memory(), 1);
        assert!(enumerate_cycles(small.base(), 4).unwrap().all(|w| !w.is_present()));
    }

    #[test]
    fn reduce_memory_examples() {
        let r = reduce_memory(&conv(&[&[5, 5], &[5, 6]]));
        assert_eq!(r.code.base().entries(), &[0, 0, 0, 1]);
        assert_eq!(r.code.memory(), 1);

        let flat = conv(&[&[0, 0], &[0, 0]]);
        assert_eq!(reduce_memory(&flat).code, flat);

        // Rank-one structure p_ij = u_i + v_j is flattened completely.
        let r = reduce_memory(&conv(&[&[0, 1, 3], &[10, 11, 13]]));
        assert_eq!(r.code.memory(), 0);
    }

    #[test]
    fn reduce_memory_offsets_reproduce_output() {
        let code = cc_c3_g10_a4();
        let r = reduce_memory(&code);
        assert!(r.code.memory() <= code.memory());
        let mut moved = Vec::new();
        for i in 0..code.c() {
            for j in 0..code.a() {
                moved.push(code.base().get(i, j) as i64 + r.row_offsets[i] + r.col_offsets[j]);
            }
        }
        let got: Vec<i64> = r.code.base().entries().iter().map(|&x| x as i64).collect();
        assert_eq!(moved, got);
    }
}
