//! Compact QC-LDPC block codes and monomial SC-LDPC convolutional codes.
//!
//! Exponent matrices, cycle and girth analysis, SMC design search,
//! unwrapping to convolutional codes, belief-propagation and sliding-window
//! decoding, Monte Carlo simulation, and latency/complexity metrics.
//!
//! Soft-decision code is generic over the LLR float ([`Llr`]) and the metrics
//! over [`Scalar`], which also covers exact rationals. The aliases below fix
//! the common choices.

pub mod catalog;
pub mod coupled;
pub mod cycles;
pub mod decoder;
pub mod encode;
pub mod error;
pub mod exponent;
pub mod gf2;
pub mod metrics;
pub mod parity;
pub mod scalar;
pub mod sim;
pub mod smc;
pub mod tanner;

pub use num_rational::Rational64;

pub use catalog::{verify_catalog, Catalog, CatalogEntry, CatalogReport, CodeKind, VerifyOptions};
pub use coupled::{
    band_blocks, chain_matrix, reduce_memory, to_symbolic, unwrap_qc, window_matrix, ConvolutionalCode,
    MemoryReduction, TerminatedChain,
};
pub use cycles::{enumerate_cycles, girth, shortest_cycle, CycleCandidate, CycleClass, CycleWitness, Girth};
pub use decoder::{bp_decode, sliding_window_decode, Algorithm, BpDecoder, DecodeOutcome, DecoderConfig, SlidingWindowConfig};
pub use encode::{effective_rate, encode_block, Encoder};
pub use error::{Error, Result};
pub use exponent::{ExponentMatrix, Lifting};
pub use metrics::{f_complexity, theta_mh, theta_n, LatencyReport};
pub use parity::{expand_block, ParityCheckMatrix};
pub use scalar::{Llr, Scalar};
pub use sim::{run_block_sim, run_sc_sim, ChannelConfig, SimOptions, SimResult, StopRule};
pub use smc::{find_min_lifting, SmcResult, SmcSearchConfig};
pub use tanner::tanner_girth_oracle;

pub type DecoderConfigF32 = DecoderConfig<f32>;
pub type DecoderConfigF64 = DecoderConfig<f64>;
pub type LatencyReportF64 = LatencyReport<f64>;
pub type LatencyReportExact = LatencyReport<Rational64>;
