//! Sparse binary parity-check matrices and CPM expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;

/// Where a 1 of an expanded matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockOrigin {
    pub block_row: usize,
    pub block_col: usize,
    pub shift: u64,
}

/// Binary matrix stored as one edge list, sorted by row then column, with a
/// column-side index over the same edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    rows: usize,
    cols: usize,
    /// Edge `e` is the 1 at `(edge_row[e], edge_col[e])`.
    edge_row: Vec<usize>,
    edge_col: Vec<usize>,
    /// Edges of row `r` are `row_ptr[r]..row_ptr[r + 1]`.
    row_ptr: Vec<usize>,
    /// Edge ids grouped by column: `col_edges[col_ptr[c]..col_ptr[c + 1]]`.
    col_ptr: Vec<usize>,
    col_edges: Vec<usize>,
    origin: Option<Vec<BlockOrigin>>,
}

impl ParityCheckMatrix {
    /// Builds from `(row, col)` positions. Duplicates collapse to one entry.
    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut e: Vec<(usize, usize)> = entries.into_iter().collect();
        if let Some(&(r, c)) = e.iter().find(|&&(r, c)| r >= rows || c >= cols) {
            return Err(Error::param(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        e.sort_unstable();
        e.dedup();
        Ok(Self::build(rows, cols, e.into_iter().map(|(r, c)| (r, c, None))))
    }

    pub fn from_dense(rows: usize, cols: usize, bits: &[u8]) -> Result<Self> {
        if bits.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, actual: bits.len() });
        }
        Self::from_entries(
            rows,
            cols,
            bits.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| (i / cols, i % cols)),
        )
    }

    /// `entries` must be sorted by (row, col) without duplicates.
    fn build(rows: usize, cols: usize, entries: impl Iterator<Item = (usize, usize, Option<BlockOrigin>)>) -> Self {
        let mut edge_row = Vec::new();
        let mut edge_col = Vec::new();
        let mut origin = Vec::new();
        let mut has_origin = true;
        for (r, c, o) in entries {
            edge_row.push(r);
            edge_col.push(c);
            match o {
                Some(o) => origin.push(o),
                None => has_origin = false,
            }
        }
        let mut row_ptr = vec![0; rows + 1];
        for &r in &edge_row {
            row_ptr[r + 1] += 1;
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut col_ptr = vec![0; cols + 1];
        for &c in &edge_col {
            col_ptr[c + 1] += 1;
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut fill = col_ptr.clone();
        let mut col_edges = vec![0; edge_col.len()];
        for (e, &c) in edge_col.iter().enumerate() {
            col_edges[fill[c]] = e;
            fill[c] += 1;
        }
        Self {
            rows,
            cols,
            edge_row,
            edge_col,
            row_ptr,
            col_ptr,
            col_edges,
            origin: (has_origin && !origin.is_empty()).then_some(origin),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of ones.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.edge_col.len()
    }

    /// Edge ids of row `r`; they are contiguous.
    #[inline]
    pub fn row_edges(&self, r: usize) -> std::ops::Range<usize> {
        self.row_ptr[r]..self.row_ptr[r + 1]
    }

    #[inline]
    pub fn col_edges(&self, c: usize) -> &[usize] {
        &self.col_edges[self.col_ptr[c]..self.col_ptr[c + 1]]
    }

    #[inline]
    pub fn edge_col(&self, e: usize) -> usize {
        self.edge_col[e]
    }

    #[inline]
    pub fn edge_row(&self, e: usize) -> usize {
        self.edge_row[e]
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_cols(&self, r: usize) -> &[usize] {
        &self.edge_col[self.row_edges(r)]
    }

    pub fn col_rows(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.col_edges(c).iter().map(move |&e| self.edge_row[e])
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_cols(r).binary_search(&c).is_ok()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_row.iter().copied().zip(self.edge_col.iter().copied())
    }

    /// Source CPM block of each edge, for matrices built by expansion.
    pub fn origin(&self, e: usize) -> Option<BlockOrigin> {
        self.origin.as_ref().map(|o| o[e])
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_ptr[r + 1] - self.row_ptr[r]
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.col_ptr[c + 1] - self.col_ptr[c]
    }

    /// `H x` over GF(2). `bits` must have one entry (0 or 1) per column.
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, actual: bits.len() });
        }
        Ok((0..self.rows).map(|r| self.row_cols(r).iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1))).collect())
    }

    pub fn is_codeword(&self, bits: &[u8]) -> Result<bool> {
        Ok(self.syndrome(bits)?.iter().all(|&s| s == 0))
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut d = vec![vec![0u8; self.cols]; self.rows];
        for (r, c) in self.entries() {
            d[r][c] = 1;
        }
        d
    }

    /// Submatrix on the given (ascending) rows and columns, renumbered.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut entries = Vec::new();
        for r in rows.clone() {
            for e in self.row_edges(r) {
                let c = self.edge_col[e];
                if cols.contains(&c) {
                    entries.push((r - rows.start, c - cols.start, self.origin(e)));
                }
            }
        }
        Self::build(rows.len(), cols.len(), entries.into_iter())
    }
}

/// Expands a finite-lifting exponent matrix into its `mN x nN` parity-check
/// matrix: block `(i, j)` is the identity with rows cyclically shifted by
/// `p_ij`, so row `r` of the block has its 1 in column `(r + p_ij) mod N`.
pub fn expand_block(p: &ExponentMatrix) -> Result<ParityCheckMatrix> {
    let n = p
        .lifting()
        .finite()
        .ok_or_else(|| Error::param("block expansion needs a finite lifting degree"))? as usize;
    let mut entries = Vec::with_capacity(p.rows() * p.cols() * n);
    for i in 0..p.rows() {
        for r in 0..n {
            let mut row: Vec<_> = (0..p.cols())
                .map(|j| {
                    let shift = p.get(i, j);
                    (i * n + r, j * n + (r + shift as usize) % n, Some(BlockOrigin { block_row: i, block_col: j, shift }))
                })
                .collect();
            row.sort_unstable_by_key(|&(_, c, _)| c);
            entries.extend(row);
        }
    }
    Ok(ParityCheckMatrix::build(p.rows() * n, p.cols() * n, entries.into_iter()))
}
