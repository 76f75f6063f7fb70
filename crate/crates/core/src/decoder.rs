//! Belief-propagation decoding in the LLR domain.
//!
//! Positive LLRs favour bit 0. The schedule is flooding: every check node is
//! updated from the previous variable-to-check messages, then every variable
//! node. Sum-product uses the pairwise box-plus
//! `a [+] b = sgn(a) sgn(b) min(|a|, |b|) + ln(1 + e^-|a+b|) - ln(1 + e^-|a-b|)`
//! evaluated with forward/backward partial results, which stays finite for
//! large magnitudes.

use serde::{Deserialize, Serialize};

use crate::coupled::{ConvolutionalCode, TerminatedChain};
use crate::error::{Error, Result};
use crate::parity::ParityCheckMatrix;
use crate::scalar::Llr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Algorithm<F> {
    SumProduct,
    /// Min-sum with the check-to-variable magnitudes multiplied by `scale`.
    MinSum { scale: F },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig<F> {
    pub algorithm: Algorithm<F>,
    pub max_iters: usize,
    /// Stop as soon as the hard decisions satisfy every check.
    pub early_stop: bool,
    /// Channel LLRs and messages are saturated to `[-llr_clip, llr_clip]`.
    pub llr_clip: F,
}

pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_LLR_CLIP: f64 = 25.0;
pub const DEFAULT_MIN_SUM_SCALE: f64 = 0.75;

impl<F: Llr> Default for DecoderConfig<F> {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::SumProduct,
            max_iters: DEFAULT_MAX_ITERS,
            early_stop: true,
            llr_clip: F::lit(DEFAULT_LLR_CLIP),
        }
    }
}

impl<F: Llr> DecoderConfig<F> {
    pub fn min_sum(scale: F) -> Self {
        Self { algorithm: Algorithm::MinSum { scale }, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::param("at least one iteration is required"));
        }
        if !(self.llr_clip > F::zero()) || !self.llr_clip.is_finite() {
            return Err(Error::param("LLR clip must be positive and finite"));
        }
        if let Algorithm::MinSum { scale } = self.algorithm {
            if !(scale > F::zero() && scale <= F::one()) {
                return Err(Error::param("min-sum scale must lie in (0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    /// One hard decision (0 or 1) per codeword or chain symbol.
    pub decisions: Vec<u8>,
    /// Iterations run; for sliding-window decoding, summed over positions.
    pub iterations: usize,
    /// Whether the final decisions satisfy every parity check.
    pub syndrome_ok: bool,
    /// Number of window positions (1 for whole-block decoding).
    pub windows: usize,
}

#[inline]
fn boxplus<F: Llr>(a: F, b: F) -> F {
    let sign = if (a < F::zero()) ^ (b < F::zero()) { -F::one() } else { F::one() };
    let m = a.abs().min(b.abs());
    sign * m + ((-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p())
}

#[inline]
fn clip<F: Llr>(x: F, c: F) -> F {
    x.max(-c).min(c)
}

/// Reusable decoder bound to one parity-check matrix.
pub struct BpDecoder<'h, F> {
    h: &'h ParityCheckMatrix,
    cfg: DecoderConfig<F>,
    c2v: Vec<F>,
    v2c: Vec<F>,
    total: Vec<F>,
    fwd: Vec<F>,
    decisions: Vec<u8>,
}

impl<'h, F: Llr> BpDecoder<'h, F> {
    pub fn new(h: &'h ParityCheckMatrix, cfg: DecoderConfig<F>) -> Result<Self> {
        cfg.validate()?;
        let max_deg = (0..h.rows()).map(|r| h.row_weight(r)).max().unwrap_or(0);
        Ok(Self {
            h,
            cfg,
            c2v: vec![F::zero(); h.nnz()],
            v2c: vec![F::zero(); h.nnz()],
            total: vec![F::zero(); h.cols()],
            fwd: vec![F::zero(); max_deg],
            decisions: vec![0; h.cols()],
        })
    }

    pub fn config(&self) -> &DecoderConfig<F> {
        &self.cfg
    }

    pub fn decode(&mut self, llr: &[F]) -> Result<DecodeOutcome> {
        self.run(llr, None)
    }

    /// Decodes against checks whose parity must equal `parity[r]` instead of 0.
    pub fn decode_with_parity(&mut self, llr: &[F], parity: &[u8]) -> Result<DecodeOutcome> {
        if parity.len() != self.h.rows() {
            return Err(Error::Dimension { expected: self.h.rows(), actual: parity.len() });
        }
        self.run(llr, Some(parity))
    }

    fn run(&mut self, llr: &[F], parity: Option<&[u8]>) -> Result<DecodeOutcome> {
        let h = self.h;
        if llr.len() != h.cols() {
            return Err(Error::Dimension { expected: h.cols(), actual: llr.len() });
        }
        let c = self.cfg.llr_clip;
        let channel: Vec<F> = llr.iter().map(|&x| clip(x, c)).collect();
        if channel.iter().any(|x| x.is_nan()) {
            return Err(Error::param("NaN channel LLR"));
        }
        for e in 0..h.nnz() {
            self.v2c[e] = channel[h.edge_col(e)];
        }

        let mut iterations = 0;
        let mut ok = false;
        while iterations < self.cfg.max_iters {
            iterations += 1;
            for r in 0..h.rows() {
                let flip = parity.is_some_and(|p| p[r] & 1 == 1);
                self.update_check(r, flip);
            }
            for v in 0..h.cols() {
                let edges = h.col_edges(v);
                let t = channel[v] + edges.iter().map(|&e| self.c2v[e]).sum::<F>();
                self.total[v] = t;
                self.decisions[v] = u8::from(t < F::zero());
                for &e in edges {
                    self.v2c[e] = clip(t - self.c2v[e], c);
                }
            }
            ok = self.satisfied(parity);
            if ok && self.cfg.early_stop {
                break;
            }
        }
        Ok(DecodeOutcome { decisions: self.decisions.clone(), iterations, syndrome_ok: ok, windows: 1 })
    }

    fn update_check(&mut self, r: usize, flip: bool) {
        let edges = self.h.row_edges(r);
        let d = edges.len();
        let c = self.cfg.llr_clip;
        let start = edges.start;
        let sign_out = if flip { -F::one() } else { F::one() };
        if d == 1 {
            self.c2v[start] = sign_out * c;
            return;
        }
        match self.cfg.algorithm {
            Algorithm::SumProduct => {
                let x = &self.v2c[edges.clone()];
                self.fwd[0] = x[0];
                for i in 1..d {
                    self.fwd[i] = boxplus(self.fwd[i - 1], x[i]);
                }
                let mut back = x[d - 1];
                self.c2v[start + d - 1] = clip(sign_out * self.fwd[d - 2], c);
                for i in (1..d - 1).rev() {
                    self.c2v[start + i] = clip(sign_out * boxplus(self.fwd[i - 1], back), c);
                    back = boxplus(x[i], back);
                }
                self.c2v[start] = clip(sign_out * back, c);
            }
            Algorithm::MinSum { scale } => {
                let x = &self.v2c[edges.clone()];
                let mut min1 = F::infinity();
                let mut min2 = F::infinity();
                let mut arg = 0;
                let mut negative = flip;
                for (i, &v) in x.iter().enumerate() {
                    let a = v.abs();
                    negative ^= v < F::zero();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = i;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for i in 0..d {
                    let v = self.v2c[start + i];
                    let mag = if i == arg { min2 } else { min1 };
                    let neg = negative ^ (v < F::zero());
                    let out = scale * mag;
                    self.c2v[start + i] = clip(if neg { -out } else { out }, c);
                }
            }
        }
    }

    fn satisfied(&self, parity: Option<&[u8]>) -> bool {
        (0..self.h.rows()).all(|r| {
            let s = self.h.row_cols(r).iter().fold(0u8, |acc, &v| acc ^ self.decisions[v]);
            s == parity.map_or(0, |p| p[r] & 1)
        })
    }

    /// A-posteriori LLRs from the last iteration.
    pub fn posteriors(&self) -> &[F] {
        &self.total
    }
}

/// One-shot belief-propagation decode.
pub fn bp_decode<F: Llr>(h: &ParityCheckMatrix, llr: &[F], cfg: &DecoderConfig<F>) -> Result<DecodeOutcome> {
    BpDecoder::new(h, *cfg)?.decode(llr)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlidingWindowConfig {
    /// `alpha` the window was derived from, when it was.
    pub alpha: Option<f64>,
    /// Window size `W` in blocks.
    pub blocks: usize,
    pub iters_per_position: usize,
}

impl SlidingWindowConfig {
    /// `W = round(alpha (m_h + 1))`, at least one block.
    pub fn from_alpha(alpha: f64, memory: u64, iters_per_position: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::param("alpha must be positive"));
        }
        let blocks = ((alpha * (memory + 1) as f64).round() as usize).max(1);
        Ok(Self { alpha: Some(alpha), blocks, iters_per_position })
    }

    pub fn with_blocks(blocks: usize, iters_per_position: usize) -> Self {
        Self { alpha: None, blocks, iters_per_position }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 {
            return Err(Error::param("window must span at least one block"));
        }
        if self.iters_per_position == 0 {
            return Err(Error::param("at least one iteration per window position is required"));
        }
        Ok(())
    }
}

/// Sliding-window decoding of a zero-tail terminated chain.
///
/// `llr_chain` holds the channel LLRs of `chain_len * a` symbols; the last
/// `m_h` blocks are the known-zero tail and are forced to `+llr_clip`. At
/// each position `t` the window spans blocks `t .. t + W`; BP runs for
/// exactly `iters_per_position` iterations from a cold start, then the `a`
/// symbols of block `t` are committed. Checks reaching back before the
/// window see the committed bits as a fixed parity. The last full window
/// commits all of its blocks, so a window covering the whole chain reduces
/// to plain BP on the chain matrix.
pub fn sliding_window_decode<F: Llr>(
    code: &ConvolutionalCode,
    llr_chain: &[F],
    swcfg: &SlidingWindowConfig,
    cfg: &DecoderConfig<F>,
) -> Result<DecodeOutcome> {
    swcfg.validate()?;
    cfg.validate()?;
    let a = code.a();
    let c = code.c();
    if llr_chain.is_empty() || !llr_chain.len().is_multiple_of(a) {
        return Err(Error::param(format!("chain LLR count {} is not a positive multiple of a = {a}", llr_chain.len())));
    }
    let chain = TerminatedChain::new(code, llr_chain.len() / a)?;
    let chain_len = chain.len();
    if swcfg.blocks > chain_len {
        return Err(Error::param(format!("window of {} blocks exceeds chain of {chain_len}", swcfg.blocks)));
    }
    let w = swcfg.blocks;

    let mut llr = llr_chain.to_vec();
    chain.terminate(&mut llr, cfg.llr_clip);

    let window_cfg = DecoderConfig { max_iters: swcfg.iters_per_position, early_stop: false, ..*cfg };
    // The band structure is shift invariant: one window matrix serves every position.
    let h = crate::coupled::window_matrix(code, w, 0, chain_len)?.h;
    let mut dec = BpDecoder::new(&h, window_cfg)?;

    let mut decisions = vec![0u8; chain_len * a];
    let mut parity = vec![0u8; w * c];
    let mut iterations = 0;
    let last = chain_len - w;
    for t in 0..=last {
        for (rl, p) in parity.iter_mut().enumerate() {
            let r = t + rl / c;
            let i = rl % c;
            *p = 0;
            for j in 0..a {
                let d = code.delay(i, j);
                if d > rl / c && r >= d {
                    *p ^= decisions[(r - d) * a + j];
                }
            }
        }
        let out = dec.decode_with_parity(&llr[t * a..(t + w) * a], &parity)?;
        iterations += out.iterations;
        let commit = if t == last { w * a } else { a };
        decisions[t * a..t * a + commit].copy_from_slice(&out.decisions[..commit]);
    }

    let syndrome_ok = chain.matrix()?.is_codeword(&decisions)?;
    Ok(DecodeOutcome { decisions, iterations, syndrome_ok, windows: last + 1 })
}
