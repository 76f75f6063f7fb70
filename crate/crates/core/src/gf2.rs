//! Dense bit-packed GF(2) elimination for ranks and systematic encoders.

use rayon::prelude::*;

use crate::parity::ParityCheckMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn from_sparse(h: &ParityCheckMatrix) -> Self {
        let mut m = Self::zeros(h.rows(), h.cols());
        for (r, c) in h.entries() {
            m.set(r, c);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// In-place reduced row echelon form. Returns the pivot column of each
    /// non-zero row, in order; `pivots.len()` is the rank.
    pub fn rref(&mut self) -> Vec<usize> {
        self.eliminate(true)
    }

    /// Rank over GF(2). Only forward elimination is performed.
    pub fn rank(mut self) -> usize {
        self.eliminate(false).len()
    }

    fn eliminate(&mut self, reduce_above: bool) -> Vec<usize> {
        let words = self.words;
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else { continue };
            self.swap_rows(p, next);
            let w0 = c / 64;
            let bit = 1u64 << (c % 64);
            let (head, tail) = self.data.split_at_mut((next + 1) * words);
            let pivot_row = &head[next * words..];
            let pr = &pivot_row[w0..];
            let clear = |row: &mut [u64]| {
                if row[w0] & bit != 0 {
                    for (x, y) in row[w0..].iter_mut().zip(pr) {
                        *x ^= y;
                    }
                }
            };
            if tail.len() > 256 * words {
                tail.par_chunks_mut(words).for_each(clear);
            } else {
                tail.chunks_mut(words).for_each(clear);
            }
            if reduce_above {
                let (above, rest) = head.split_at_mut(next * words);
                let pr = &rest[w0..words];
                for row in above.chunks_mut(words) {
                    if row[w0] & bit != 0 {
                        for (x, y) in row[w0..].iter_mut().zip(pr) {
                            *x ^= y;
                        }
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub(crate) fn row_bits(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(r);
        (0..self.cols).filter(move |&c| row[c / 64] >> (c % 64) & 1 == 1)
    }
}

/// Rank of a sparse parity-check matrix over GF(2).
pub fn rank(h: &ParityCheckMatrix) -> usize {
    BitMatrix::from_sparse(h).rank()
}
