//! Systematic encoding from the reduced row echelon form of `H`.
//!
//! Expanded QC matrices are usually rank deficient, so the code dimension is
//! `k = cols - rank(H)` and the information positions are the non-pivot
//! columns of the echelon form.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;
use crate::gf2::BitMatrix;
use crate::parity::{expand_block, ParityCheckMatrix};

#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    info_cols: Vec<usize>,
    /// `(pivot column, indices into the message)` for every echelon row.
    parity_eqs: Vec<(usize, Vec<usize>)>,
}

impl Encoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut m = BitMatrix::from_sparse(h);
        let pivots = m.rref();
        let n = h.cols();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut msg_index = vec![usize::MAX; n];
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        for (k, &c) in info_cols.iter().enumerate() {
            msg_index[c] = k;
        }
        let parity_eqs = pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| (p, m.row_bits(r).filter(|&c| c != p).map(|c| msg_index[c]).collect()))
            .collect();
        Self { n, info_cols, parity_eqs }
    }

    pub fn from_exponents(p: &ExponentMatrix) -> Result<Self> {
        Ok(Self::new(&expand_block(p)?))
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Code dimension `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.info_cols.len()
    }

    pub fn rank(&self) -> usize {
        self.parity_eqs.len()
    }

    /// Positions carrying the message bits verbatim.
    pub fn info_cols(&self) -> &[usize] {
        &self.info_cols
    }

    /// `k / n` as an exact fraction.
    pub fn rate(&self) -> Rational64 {
        Rational64::new(self.k() as i64, self.n as i64)
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k() {
            return Err(Error::param(format!("message has {} bits, code dimension is {}", message.len(), self.k())));
        }
        let mut cw = vec![0u8; self.n];
        for (&c, &b) in self.info_cols.iter().zip(message) {
            cw[c] = b & 1;
        }
        for (p, deps) in &self.parity_eqs {
            cw[*p] = deps.iter().fold(0, |acc, &i| acc ^ (message[i] & 1));
        }
        Ok(cw)
    }
}

/// Systematic codeword of the block code `P` for `message`.
pub fn encode_block(p: &ExponentMatrix, message: &[u8]) -> Result<Vec<u8>> {
    Encoder::from_exponents(p)?.encode(message)
}

/// `(nN - rank(H)) / nN` for an expanded block code.
pub fn effective_rate(p: &ExponentMatrix) -> Result<Rational64> {
    let h = expand_block(p)?;
    let n = h.cols() as i64;
    Ok(Rational64::new(n - crate::gf2::rank(&h) as i64, n))
}
