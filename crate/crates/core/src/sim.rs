//! Monte Carlo BER/BLER over BPSK and AWGN.
//!
//! Bit 0 maps to `+1`, bit 1 to `-1`; the channel LLR is `2y / sigma^2`.
//! Every trial draws from its own ChaCha8 stream keyed by
//! `(seed, snr index, trial index)`, trials run in parallel batches and are
//! folded in trial order. The stop rule is tested after each trial in
//! that order, so results do not depend on the thread count. Runs that differ
//! only in decoder or window settings see the same noise realisations.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupled::{ConvolutionalCode, TerminatedChain};
use crate::decoder::{
    sliding_window_decode, Algorithm, BpDecoder, DecodeOutcome, DecoderConfig, SlidingWindowConfig,
};
use crate::encode::Encoder;
use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;
use crate::parity::expand_block;
use crate::scalar::Llr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SnrConvention {
    /// Energy per information bit: `sigma^2 = 1 / (2 R Eb/N0)`.
    #[default]
    EbN0,
    /// Energy per channel symbol: `sigma^2 = 1 / (2 Es/N0)`.
    EsN0,
}

impl SnrConvention {
    pub fn name(self) -> &'static str {
        match self {
            SnrConvention::EbN0 => "Eb/N0",
            SnrConvention::EsN0 => "Es/N0",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            SnrConvention::EbN0 => "sigma^2 = 1/(2*R*10^(snr_db/10))",
            SnrConvention::EsN0 => "sigma^2 = 1/(2*10^(snr_db/10))",
        }
    }

    pub fn sigma2(self, snr_db: f64, rate: f64) -> f64 {
        let lin = 10f64.powf(snr_db / 10.0);
        match self {
            SnrConvention::EbN0 => 1.0 / (2.0 * rate * lin),
            SnrConvention::EsN0 => 1.0 / (2.0 * lin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub snr_db: Vec<f64>,
    pub convention: SnrConvention,
    pub seed: u64,
    /// Rate used for the Eb/N0 conversion; the effective rate when `None`.
    pub rate: Option<f64>,
}

impl ChannelConfig {
    pub fn new(snr_db: Vec<f64>, seed: u64) -> Self {
        Self { snr_db, convention: SnrConvention::EbN0, seed, rate: None }
    }

    /// Points `start, start + step, ...` up to `stop` inclusive.
    pub fn sweep(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::param(format!("bad SNR sweep {start}:{stop}:{step}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| start + i as f64 * step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    /// Stop once this many block errors are seen.
    pub min_block_errors: Option<u64>,
    /// Stop once this many bits are sent.
    pub max_bits: Option<u64>,
    /// Stop once this many blocks are sent.
    pub max_blocks: Option<u64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_block_errors: Some(100), max_bits: Some(10_000_000), max_blocks: None }
    }
}

impl StopRule {
    pub fn blocks(n: u64) -> Self {
        Self { min_block_errors: None, max_bits: None, max_blocks: Some(n) }
    }

    fn validate(&self) -> Result<()> {
        if self.min_block_errors.is_none() && self.max_bits.is_none() && self.max_blocks.is_none() {
            return Err(Error::param("stop rule never fires"));
        }
        Ok(())
    }

    fn done(&self, p: &SimPoint) -> bool {
        self.min_block_errors.is_some_and(|e| p.block_errors >= e)
            || self.max_bits.is_some_and(|b| p.bits >= b)
            || self.max_blocks.is_some_and(|b| p.blocks >= b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Transmission {
    #[default]
    AllZero,
    /// Uniformly random messages through a systematic encoder.
    RandomCodewords,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimOptions {
    pub code_id: String,
    pub transmission: Transmission,
    /// Worker threads; the global rayon pool when `None`.
    pub threads: Option<usize>,
}

/// Decoder settings as recorded in a result, independent of the LLR type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderEcho {
    pub algorithm: String,
    pub min_sum_scale: Option<f64>,
    pub max_iters: usize,
    pub early_stop: bool,
    pub llr_clip: f64,
    pub precision: String,
}

impl DecoderEcho {
    pub fn of<F: Llr>(cfg: &DecoderConfig<F>) -> Self {
        let (algorithm, min_sum_scale) = match cfg.algorithm {
            Algorithm::SumProduct => ("sum-product", None),
            Algorithm::MinSum { scale } => ("min-sum", scale.to_f64()),
        };
        Self {
            algorithm: algorithm.into(),
            min_sum_scale,
            max_iters: cfg.max_iters,
            early_stop: cfg.early_stop,
            llr_clip: cfg.llr_clip.to_f64().unwrap_or(f64::NAN),
            precision: std::any::type_name::<F>().into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub sigma2: f64,
    /// Bits counted for BER. Known tail symbols of a chain are excluded.
    pub bits: u64,
    pub bit_errors: u64,
    /// Codewords (block mode) or window outputs of `a` symbols (SC mode).
    pub blocks: u64,
    pub block_errors: u64,
    /// Decoder invocations: codewords, or window positions.
    pub decodes: u64,
    pub iterations: u64,
}

impl SimPoint {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits)
    }

    pub fn bler(&self) -> f64 {
        ratio(self.block_errors, self.blocks)
    }

    /// Average iterations per decoder invocation.
    pub fn avg_iters(&self) -> f64 {
        ratio(self.iterations, self.decodes)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimMode {
    Block,
    SlidingWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub code_id: String,
    pub mode: SimMode,
    pub convention: SnrConvention,
    pub rate: f64,
    pub seed: u64,
    pub transmission: Transmission,
    pub decoder: DecoderEcho,
    pub window: Option<SlidingWindowConfig>,
    pub chain_len: Option<usize>,
    pub stop: StopRule,
    pub points: Vec<SimPoint>,
    /// Wall time per point in seconds. Not part of the CSV.
    pub wall_time_s: Vec<f64>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let opt = |x: Option<u64>| x.map_or("none".to_string(), |v| v.to_string());
        let _ = writeln!(s, "# code={}", self.code_id);
        let _ = writeln!(
            s,
            "# mode={}",
            match self.mode {
                SimMode::Block => "block",
                SimMode::SlidingWindow => "sliding-window",
            }
        );
        let d = &self.decoder;
        let _ = writeln!(s, "# decoder={}", d.algorithm);
        if let Some(sc) = d.min_sum_scale {
            let _ = writeln!(s, "# min_sum_scale={sc}");
        }
        let _ = writeln!(s, "# max_iters={}", d.max_iters);
        let _ = writeln!(s, "# early_stop={}", d.early_stop);
        let _ = writeln!(s, "# llr_clip={}", d.llr_clip);
        let _ = writeln!(s, "# precision={}", d.precision);
        match &self.window {
            Some(w) => {
                let _ = writeln!(s, "# window_blocks={}", w.blocks);
                if let Some(a) = w.alpha {
                    let _ = writeln!(s, "# alpha={a}");
                }
                let _ = writeln!(s, "# iters_per_position={}", w.iters_per_position);
            }
            None => {
                let _ = writeln!(s, "# window=none");
            }
        }
        if let Some(l) = self.chain_len {
            let _ = writeln!(s, "# chain_len={l}");
            let _ = writeln!(s, "# termination=zero-tail");
        }
        let _ = writeln!(s, "# seed={}", self.seed);
        let _ = writeln!(s, "# snr={}", self.convention.name());
        let _ = writeln!(s, "# noise={}", self.convention.formula());
        let _ = writeln!(s, "# rate={}", self.rate);
        let _ = writeln!(
            s,
            "# transmission={}",
            match self.transmission {
                Transmission::AllZero => "all-zero",
                Transmission::RandomCodewords => "random-codewords",
            }
        );
        let _ = writeln!(
            s,
            "# stop=block_errors:{},bits:{},blocks:{}",
            opt(self.stop.min_block_errors),
            opt(self.stop.max_bits),
            opt(self.stop.max_blocks)
        );
        s.push_str("snr_db,bits,bit_errors,blocks,block_errors,ber,bler,avg_iters\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.6e},{:.6e},{:.4}",
                p.snr_db,
                p.bits,
                p.bit_errors,
                p.blocks,
                p.block_errors,
                p.ber(),
                p.bler(),
                p.avg_iters()
            );
        }
        s
    }
}

/// Counter-based seed of one trial.
pub fn trial_seed(seed: u64, snr_index: usize, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ snr_index as u64).wrapping_add(trial))
}

/// BPSK over AWGN: channel LLRs for `codeword`.
pub fn awgn_llrs<F: Llr, R: Rng>(codeword: &[u8], sigma2: f64, rng: &mut R, out: &mut Vec<F>) {
    let sigma = sigma2.sqrt();
    out.clear();
    out.extend(codeword.iter().map(|&b| {
        let n: f64 = rng.sample(StandardNormal);
        let y = if b & 1 == 0 { 1.0 } else { -1.0 } + sigma * n;
        F::lit(2.0 * y / sigma2)
    }));
}

#[derive(Debug, Clone, Copy, Default)]
struct Trial {
    bits: u64,
    bit_errors: u64,
    blocks: u64,
    block_errors: u64,
    decodes: u64,
    iterations: u64,
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::param("thread count must be positive")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::param(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs trials in order until `stop` fires.
fn run_point<S, I, T>(stop: &StopRule, snr_db: f64, sigma2: f64, init: I, trial: T) -> Result<SimPoint>
where
    S: Send,
    I: Fn() -> Result<S> + Sync + Send,
    T: Fn(&mut S, u64) -> Result<Trial> + Sync + Send,
{
    let mut p = SimPoint { snr_db, sigma2, bits: 0, bit_errors: 0, blocks: 0, block_errors: 0, decodes: 0, iterations: 0 };
    // Any batch size gives the same result; only throughput depends on it.
    let batch_len = rayon::current_num_threads() as u64 * 4;
    let mut next = 0u64;
    loop {
        let batch: Vec<Result<Trial>> = (next..next + batch_len)
            .into_par_iter()
            .map_init(&init, |state, i| match state {
                Ok(s) => trial(s, i),
                Err(e) => Err(e.clone()),
            })
            .collect();
        next += batch_len;
        for t in batch {
            let t = t?;
            p.bits += t.bits;
            p.bit_errors += t.bit_errors;
            p.blocks += t.blocks;
            p.block_errors += t.block_errors;
            p.decodes += t.decodes;
            p.iterations += t.iterations;
            if stop.done(&p) {
                return Ok(p);
            }
        }
    }
}

fn count_errors(decisions: &[u8], sent: &[u8]) -> u64 {
    decisions.iter().zip(sent).filter(|(a, b)| a != b).count() as u64
}

/// Block-code simulation of the QC code `P`.
pub fn run_block_sim<F: Llr>(
    p: &ExponentMatrix,
    channel: &ChannelConfig,
    decoder_cfg: &DecoderConfig<F>,
    stop: &StopRule,
    opts: &SimOptions,
) -> Result<SimResult> {
    stop.validate()?;
    decoder_cfg.validate()?;
    let h = expand_block(p)?;
    let enc = Encoder::new(&h);
    let rate = channel.rate.unwrap_or_else(|| enc.k() as f64 / enc.n() as f64);
    let n = h.cols();

    let mut points = Vec::new();
    let mut wall = Vec::new();
    with_pool(opts.threads, || -> Result<()> {
        for (si, &snr) in channel.snr_db.iter().enumerate() {
            let started = Instant::now();
            let sigma2 = channel.convention.sigma2(snr, rate);
            let point = run_point(
                stop,
                snr,
                sigma2,
                || Ok((BpDecoder::new(&h, *decoder_cfg)?, Vec::<F>::new(), vec![0u8; n], vec![0u8; enc.k()])),
                |(dec, llr, cw, msg), i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(channel.seed, si, i));
                    if opts.transmission == Transmission::RandomCodewords {
                        msg.iter_mut().for_each(|b| *b = rng.random::<bool>() as u8);
                        *cw = enc.encode(msg)?;
                    }
                    awgn_llrs(cw, sigma2, &mut rng, llr);
                    let out = dec.decode(llr)?;
                    let e = count_errors(&out.decisions, cw);
                    Ok(Trial {
                        bits: n as u64,
                        bit_errors: e,
                        blocks: 1,
                        block_errors: u64::from(e > 0),
                        decodes: 1,
                        iterations: out.iterations as u64,
                    })
                },
            )?;
            points.push(point);
            wall.push(started.elapsed().as_secs_f64());
        }
        Ok(())
    })??;

    Ok(SimResult {
        code_id: opts.code_id.clone(),
        mode: SimMode::Block,
        convention: channel.convention,
        rate,
        seed: channel.seed,
        transmission: opts.transmission,
        decoder: DecoderEcho::of(decoder_cfg),
        window: None,
        chain_len: None,
        stop: *stop,
        points,
        wall_time_s: wall,
    })
}

/// Sliding-window simulation of a zero-tail terminated chain of `chain_len` blocks.
///
/// Every committed block of `a` symbols outside the tail is one BLER block.
pub fn run_sc_sim<F: Llr>(
    code: &ConvolutionalCode,
    channel: &ChannelConfig,
    swcfg: &SlidingWindowConfig,
    decoder_cfg: &DecoderConfig<F>,
    chain_len: usize,
    stop: &StopRule,
    opts: &SimOptions,
) -> Result<SimResult> {
    stop.validate()?;
    decoder_cfg.validate()?;
    swcfg.validate()?;
    if chain_len < swcfg.blocks {
        return Err(Error::param(format!("chain of {chain_len} blocks is shorter than a window of {}", swcfg.blocks)));
    }
    let chain = TerminatedChain::new(code, chain_len)?;
    let a = code.a();
    let data = chain.data_blocks() * a;
    let h = chain.matrix()?;
    let free = h.submatrix(0..h.rows(), 0..data);
    let enc = Encoder::new(&free);
    if enc.k() == 0 {
        return Err(Error::param(format!(
            "a zero-tail chain of {chain_len} blocks carries no information; use a chain much longer than m_h = {}",
            code.memory()
        )));
    }
    let rate = channel.rate.unwrap_or_else(|| enc.k() as f64 / chain.symbols() as f64);

    let mut points = Vec::new();
    let mut wall = Vec::new();
    with_pool(opts.threads, || -> Result<()> {
        for (si, &snr) in channel.snr_db.iter().enumerate() {
            let started = Instant::now();
            let sigma2 = channel.convention.sigma2(snr, rate);
            let point = run_point(
                stop,
                snr,
                sigma2,
                || Ok((Vec::<F>::new(), vec![0u8; chain.symbols()], vec![0u8; enc.k()])),
                |(llr, cw, msg), i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(channel.seed, si, i));
                    if opts.transmission == Transmission::RandomCodewords {
                        msg.iter_mut().for_each(|b| *b = rng.random::<bool>() as u8);
                        cw[..data].copy_from_slice(&enc.encode(msg)?);
                    }
                    awgn_llrs(cw, sigma2, &mut rng, llr);
                    let out: DecodeOutcome = sliding_window_decode(code, llr, swcfg, decoder_cfg)?;
                    let mut t = Trial { decodes: out.windows as u64, iterations: out.iterations as u64, ..Trial::default() };
                    for (got, sent) in out.decisions[..data].chunks(a).zip(cw[..data].chunks(a)) {
                        let e = count_errors(got, sent);
                        t.bits += a as u64;
                        t.bit_errors += e;
                        t.blocks += 1;
                        t.block_errors += u64::from(e > 0);
                    }
                    Ok(t)
                },
            )?;
            points.push(point);
            wall.push(started.elapsed().as_secs_f64());
        }
        Ok(())
    })??;

    Ok(SimResult {
        code_id: opts.code_id.clone(),
        mode: SimMode::SlidingWindow,
        convention: channel.convention,
        rate,
        seed: channel.seed,
        transmission: opts.transmission,
        decoder: DecoderEcho::of(decoder_cfg),
        window: Some(*swcfg),
        chain_len: Some(chain_len),
        stop: *stop,
        points,
        wall_time_s: wall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Lifting;

    fn girth10_n4() -> ExponentMatrix {
        ExponentMatrix::from_rows(&[[0u64, 0, 0, 0], [0, 1, 3, 24], [0, 27, 7, 19]], Lifting::Finite(37)).unwrap()
    }

    #[test]
    fn sigma_conventions() {
        assert!((SnrConvention::EsN0.sigma2(0.0, 0.5) - 0.5).abs() < 1e-15);
        assert!((SnrConvention::EbN0.sigma2(0.0, 0.5) - 1.0).abs() < 1e-15);
        assert!((SnrConvention::EbN0.sigma2(10.0, 1.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn sweep_points() {
        assert_eq!(ChannelConfig::sweep(1.0, 2.0, 0.5).unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(ChannelConfig::sweep(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
        assert!(ChannelConfig::sweep(2.0, 1.0, 0.5).is_err());
        assert!(ChannelConfig::sweep(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        let s: std::collections::HashSet<u64> =
            (0..3).flat_map(|si| (0..1000).map(move |t| trial_seed(7, si, t))).collect();
        assert_eq!(s.len(), 3000);
    }

    #[test]
    fn noisy_channel_raw_decisions_are_coin_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut llr: Vec<f64> = Vec::new();
        awgn_llrs(&vec![0u8; 200_000], 1e8, &mut rng, &mut llr);
        let wrong = llr.iter().filter(|&&x| x < 0.0).count() as f64 / 200_000.0;
        assert!((wrong - 0.5).abs() < 0.005, "{wrong}");
    }

    #[test]
    fn block_sim_high_snr_and_determinism() {
        let ch = ChannelConfig::new(vec![10.0], 42);
        let cfg = DecoderConfig::<f64>::default();
        let opts = SimOptions { code_id: "t1n4".into(), ..Default::default() };
        let a = run_block_sim(&girth10_n4(), &ch, &cfg, &StopRule::blocks(300), &opts).unwrap();
        assert_eq!(a.points[0].bit_errors, 0);
        assert_eq!(a.points[0].blocks, 300);
        let b = run_block_sim(&girth10_n4(), &ch, &cfg, &StopRule::blocks(300), &SimOptions { threads: Some(3), ..opts })
            .unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn stop_on_errors_is_exact() {
        let ch = ChannelConfig::new(vec![0.0], 3);
        let stop = StopRule { min_block_errors: Some(5), max_bits: None, max_blocks: None };
        let cfg = DecoderConfig::<f32> { max_iters: 10, ..Default::default() };
        let r = run_block_sim(&girth10_n4(), &ch, &cfg, &stop, &SimOptions::default()).unwrap();
        assert_eq!(r.points[0].block_errors, 5);
        assert!(r.points[0].bit_errors >= 5);
    }

    #[test]
    fn sc_sim_noiseless() {
        let code = ConvolutionalCode::new(
            &ExponentMatrix::from_rows(&[[6u64, 11, 0, 9], [11, 2, 0, 11], [4, 1, 11, 0]], Lifting::Unbounded).unwrap(),
        )
        .unwrap();
        let ch = ChannelConfig { snr_db: vec![60.0], convention: SnrConvention::EsN0, seed: 1, rate: None };
        let sw = SlidingWindowConfig::with_blocks(12, 3);
        let r = run_sc_sim(&code, &ch, &sw, &DecoderConfig::<f64>::default(), 60, &StopRule::blocks(10), &SimOptions::default())
            .unwrap();
        let p = r.points[0];
        assert_eq!(p.bit_errors, 0);
        assert_eq!(p.blocks, 49);
        assert_eq!(p.bits, 49 * 4);
        // 19 data blocks against 30 block rows of checks leave no information.
        assert!(run_sc_sim(&code, &ch, &sw, &DecoderConfig::<f64>::default(), 30, &StopRule::blocks(1), &SimOptions::default())
            .is_err());
        assert!(run_sc_sim(&code, &ch, &sw, &DecoderConfig::<f64>::default(), 11, &StopRule::blocks(1), &SimOptions::default())
            .is_err());
    }
}
