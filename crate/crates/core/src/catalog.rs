//! Embedded catalog of published compact codes and its regression check.
//!
//! Each code is a data file in the exponent-matrix text format; the manifest
//! carries the claimed parameters and the best earlier value with its
//! citation key. Block codes are stored in full, first row and column
//! included. Convolutional codes use unbounded lifting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupled::ConvolutionalCode;
use crate::cycles::{girth, shortest_cycle, CycleWitness, Girth, DEFAULT_GIRTH_CAP};
use crate::error::{Error, Result};
use crate::exponent::{ExponentMatrix, Lifting};
use crate::metrics::{constraint_length, theta_mh, theta_n};

const MANIFEST: &str = include_str!("../catalog/manifest.toml");

const FILES: &[(&str, &str)] = &[
    ("cc-c3-g10-a4", include_str!("../catalog/cc-c3-g10-a4.txt")),
    ("cc-c3-g10-a5", include_str!("../catalog/cc-c3-g10-a5.txt")),
    ("cc-c3-g10-a6", include_str!("../catalog/cc-c3-g10-a6.txt")),
    ("cc-c3-g10-a7", include_str!("../catalog/cc-c3-g10-a7.txt")),
    ("cc-c3-g10-a8", include_str!("../catalog/cc-c3-g10-a8.txt")),
    ("cc-c3-g10-a9", include_str!("../catalog/cc-c3-g10-a9.txt")),
    ("cc-c3-g10-a10", include_str!("../catalog/cc-c3-g10-a10.txt")),
    ("cc-c3-g10-a11", include_str!("../catalog/cc-c3-g10-a11.txt")),
    ("cc-c3-g10-a12", include_str!("../catalog/cc-c3-g10-a12.txt")),
    ("cc-c3-g12-a4", include_str!("../catalog/cc-c3-g12-a4.txt")),
    ("cc-c3-g12-a5", include_str!("../catalog/cc-c3-g12-a5.txt")),
    ("cc-c3-g12-a6", include_str!("../catalog/cc-c3-g12-a6.txt")),
    ("cc-c3-g12-a7", include_str!("../catalog/cc-c3-g12-a7.txt")),
    ("cc-c3-g12-a8", include_str!("../catalog/cc-c3-g12-a8.txt")),
    ("cc-c3-g12-a9", include_str!("../catalog/cc-c3-g12-a9.txt")),
    ("cc-c3-g12-a10", include_str!("../catalog/cc-c3-g12-a10.txt")),
    ("cc-c3-g12-a11", include_str!("../catalog/cc-c3-g12-a11.txt")),
    ("cc-c4-g10-a5", include_str!("../catalog/cc-c4-g10-a5.txt")),
    ("cc-c4-g10-a6", include_str!("../catalog/cc-c4-g10-a6.txt")),
    ("cc-c4-g10-a7", include_str!("../catalog/cc-c4-g10-a7.txt")),
    ("cc-c4-g10-a8", include_str!("../catalog/cc-c4-g10-a8.txt")),
    ("cc-c4-g10-a9", include_str!("../catalog/cc-c4-g10-a9.txt")),
    ("cc-c4-g10-a10", include_str!("../catalog/cc-c4-g10-a10.txt")),
    ("cc-c4-g10-a11", include_str!("../catalog/cc-c4-g10-a11.txt")),
    ("cc-c4-g10-a12", include_str!("../catalog/cc-c4-g10-a12.txt")),
    ("cc-c4-g12-a5", include_str!("../catalog/cc-c4-g12-a5.txt")),
    ("cc-c4-g12-a6", include_str!("../catalog/cc-c4-g12-a6.txt")),
    ("cc-c4-g12-a7", include_str!("../catalog/cc-c4-g12-a7.txt")),
    ("qc-m3-g10-n4", include_str!("../catalog/qc-m3-g10-n4.txt")),
    ("qc-m3-g10-n5", include_str!("../catalog/qc-m3-g10-n5.txt")),
    ("qc-m3-g10-n6", include_str!("../catalog/qc-m3-g10-n6.txt")),
    ("qc-m3-g10-n7", include_str!("../catalog/qc-m3-g10-n7.txt")),
    ("qc-m3-g10-n8", include_str!("../catalog/qc-m3-g10-n8.txt")),
    ("qc-m3-g10-n9", include_str!("../catalog/qc-m3-g10-n9.txt")),
    ("qc-m3-g10-n10", include_str!("../catalog/qc-m3-g10-n10.txt")),
    ("qc-m3-g10-n11", include_str!("../catalog/qc-m3-g10-n11.txt")),
    ("qc-m3-g10-n12", include_str!("../catalog/qc-m3-g10-n12.txt")),
    ("qc-m3-g12-n4", include_str!("../catalog/qc-m3-g12-n4.txt")),
    ("qc-m3-g12-n5", include_str!("../catalog/qc-m3-g12-n5.txt")),
    ("qc-m3-g12-n6", include_str!("../catalog/qc-m3-g12-n6.txt")),
    ("qc-m3-g12-n7", include_str!("../catalog/qc-m3-g12-n7.txt")),
    ("qc-m3-g12-n8", include_str!("../catalog/qc-m3-g12-n8.txt")),
    ("qc-m3-g12-n9", include_str!("../catalog/qc-m3-g12-n9.txt")),
    ("qc-m3-g12-n10", include_str!("../catalog/qc-m3-g12-n10.txt")),
    ("qc-m3-g12-n11", include_str!("../catalog/qc-m3-g12-n11.txt")),
    ("qc-m4-g10-n5", include_str!("../catalog/qc-m4-g10-n5.txt")),
    ("qc-m4-g10-n6", include_str!("../catalog/qc-m4-g10-n6.txt")),
    ("qc-m4-g10-n7", include_str!("../catalog/qc-m4-g10-n7.txt")),
    ("qc-m4-g10-n8", include_str!("../catalog/qc-m4-g10-n8.txt")),
    ("qc-m4-g10-n9", include_str!("../catalog/qc-m4-g10-n9.txt")),
    ("qc-m4-g10-n10", include_str!("../catalog/qc-m4-g10-n10.txt")),
    ("qc-m4-g10-n11", include_str!("../catalog/qc-m4-g10-n11.txt")),
    ("qc-m4-g10-n12", include_str!("../catalog/qc-m4-g10-n12.txt")),
    ("qc-m4-g12-n5", include_str!("../catalog/qc-m4-g12-n5.txt")),
    ("qc-m4-g12-n6", include_str!("../catalog/qc-m4-g12-n6.txt")),
    ("qc-m4-g12-n7", include_str!("../catalog/qc-m4-g12-n7.txt")),
];

/// Rates are compared to the published three-digit values with this slack.
pub const RATE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Block,
    Convolutional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    /// Lifting degree (block) or memory (convolutional) of the earlier code.
    pub value: u64,
    pub cites: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawEntry {
    id: String,
    kind: CodeKind,
    file: String,
    girth: usize,
    lifting: Option<u64>,
    memory: Option<u64>,
    rate: Option<f64>,
    reference: Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogPair {
    pub id: String,
    /// Catalog id of the new code.
    pub new: String,
    pub new_memory: u64,
    pub reference_memory: u64,
    pub new_constraint_length: u64,
    pub reference_constraint_length: u64,
    /// Published `(m_h,new + 1) / (m_h,ref + 1)`, four decimals.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct Manifest {
    entry: Vec<RawEntry>,
    #[serde(default)]
    pair: Vec<CatalogPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: CodeKind,
    pub claimed_girth: usize,
    /// Claimed `N` of a block code.
    pub lifting: Option<u64>,
    /// Claimed `m_h` of a convolutional code.
    pub memory: Option<u64>,
    /// Published rate of a block code.
    pub rate: Option<f64>,
    pub reference: Reference,
    pub matrix: ExponentMatrix,
}

impl CatalogEntry {
    /// `m` or `c`.
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// `n` or `a`.
    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn as_convolutional(&self) -> Result<ConvolutionalCode> {
        ConvolutionalCode::new(&self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub pairs: Vec<CatalogPair>,
}

impl Catalog {
    /// The catalog compiled into the library.
    pub fn builtin() -> Result<Self> {
        Self::from_sources(MANIFEST, |name| {
            let stem = name.strip_suffix(".txt").unwrap_or(name);
            FILES.iter().find(|(n, _)| *n == stem).map(|(_, t)| t.to_string())
        })
    }

    /// Raw sources of the built-in catalog as `(file name, contents)`,
    /// manifest first.
    pub fn builtin_sources() -> impl Iterator<Item = (String, &'static str)> {
        std::iter::once(("manifest.toml".to_string(), MANIFEST))
            .chain(FILES.iter().map(|(stem, text)| (format!("{stem}.txt"), *text)))
    }

    /// Builds a catalog from a manifest and a file lookup.
    pub fn from_sources(manifest: &str, file: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let m: Manifest = toml::from_str(manifest).map_err(|e| Error::Catalog(format!("manifest: {e}")))?;
        let mut entries = Vec::with_capacity(m.entry.len());
        for raw in m.entry {
            let text = file(&raw.file).ok_or_else(|| Error::Catalog(format!("{}: missing file {}", raw.id, raw.file)))?;
            let matrix = ExponentMatrix::parse(&text).map_err(|e| Error::Catalog(format!("{}: {e}", raw.id)))?;
            match (raw.kind, matrix.lifting()) {
                (CodeKind::Block, Lifting::Finite(_)) if raw.lifting.is_some() => {}
                (CodeKind::Convolutional, Lifting::Unbounded) if raw.memory.is_some() => {}
                _ => return Err(Error::Catalog(format!("{}: kind, lifting and claims disagree", raw.id))),
            }
            entries.push(CatalogEntry {
                id: raw.id,
                kind: raw.kind,
                claimed_girth: raw.girth,
                lifting: raw.lifting,
                memory: raw.memory,
                rate: raw.rate,
                reference: raw.reference,
                matrix,
            });
        }
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Catalog(format!("duplicate id {}", w[0])));
        }
        Ok(Self { entries, pairs: m.pair })
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Also recompute effective rates of block codes (needs a GF(2) rank of
    /// the expanded matrix, the slow part for large liftings).
    pub rates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub kind: CodeKind,
    pub claimed_girth: usize,
    pub girth: Girth,
    pub girth_ok: bool,
    /// Claimed `N` equals the lifting, or claimed `m_h` equals max - min.
    pub parameter_ok: bool,
    pub parameter_detail: String,
    pub effective_rate: Option<f64>,
    /// Set when the recomputed rate is more than [`RATE_TOLERANCE`] away
    /// from the published one. Informational only.
    pub rate_note: Option<String>,
    /// A cycle shorter than claimed, when the girth check fails that way.
    pub witness: Option<CycleWitness>,
    /// `N / N_ref` or `(m_h + 1) / (m_h,ref + 1)`.
    pub theta: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub id: String,
    pub theta: f64,
    pub theta_ok: bool,
    pub constraint_lengths_ok: bool,
    pub memory_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub pairs: Vec<PairReport>,
    /// Smallest block-code ratio against the cited references.
    pub min_theta_n: Option<(String, f64)>,
    /// Smallest convolutional ratio against the cited references.
    pub min_theta_mh: Option<(String, f64)>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed) && self.pairs.iter().all(|p| p.passed)
    }
}

pub fn verify_entry(e: &CatalogEntry, opts: &VerifyOptions) -> Result<EntryReport> {
    let p = &e.matrix;
    let g = girth(p, DEFAULT_GIRTH_CAP)?;
    let girth_ok = g == Girth::Exactly(e.claimed_girth);
    let witness = match g {
        Girth::Exactly(x) if x < e.claimed_girth => shortest_cycle(p, x)?,
        _ => None,
    };

    let (parameter_ok, parameter_detail, theta) = match e.kind {
        CodeKind::Block => {
            let n = p.lifting().finite().unwrap_or(0);
            let claimed = e.lifting.unwrap_or(0);
            (n == claimed, format!("N = {n}, claimed {claimed}"), theta_n::<f64>(claimed, e.reference.value)?)
        }
        CodeKind::Convolutional => {
            let mh = p.max_entry() - p.min_entry();
            let claimed = e.memory.unwrap_or(0);
            (mh == claimed, format!("m_h = {mh}, claimed {claimed}"), theta_mh::<f64>(claimed, e.reference.value))
        }
    };

    let mut effective_rate = None;
    let mut rate_note = None;
    if opts.rates && e.kind == CodeKind::Block {
        let r = crate::encode::effective_rate(p)?;
        let r = *r.numer() as f64 / *r.denom() as f64;
        effective_rate = Some(r);
        if let Some(claimed) = e.rate {
            if (r - claimed).abs() > RATE_TOLERANCE {
                rate_note = Some(format!("effective rate {r:.4} differs from published {claimed}"));
            }
        }
    }

    Ok(EntryReport {
        id: e.id.clone(),
        kind: e.kind,
        claimed_girth: e.claimed_girth,
        girth: g,
        girth_ok,
        parameter_ok,
        parameter_detail,
        effective_rate,
        rate_note,
        witness,
        theta,
        passed: girth_ok && parameter_ok,
    })
}

pub fn verify_pair(cat: &Catalog, pair: &CatalogPair) -> Result<PairReport> {
    let new = cat.get(&pair.new).ok_or_else(|| Error::Catalog(format!("{}: unknown entry {}", pair.id, pair.new)))?;
    let code = new.as_convolutional()?;
    let theta = theta_mh::<f64>(pair.new_memory, pair.reference_memory);
    let theta_ok = (theta - pair.theta).abs() <= 1e-4;
    let constraint_lengths_ok = constraint_length(pair.new_memory, code.a() as u64) == pair.new_constraint_length
        && constraint_length(pair.reference_memory, code.a() as u64) == pair.reference_constraint_length;
    let memory_ok = code.memory() == pair.new_memory;
    Ok(PairReport {
        id: pair.id.clone(),
        theta,
        theta_ok,
        constraint_lengths_ok,
        memory_ok,
        passed: theta_ok && constraint_lengths_ok && memory_ok,
    })
}

/// Verifies every entry and pair of `cat`.
pub fn verify(cat: &Catalog, opts: &VerifyOptions) -> Result<CatalogReport> {
    let entries = cat.entries.par_iter().map(|e| verify_entry(e, opts)).collect::<Result<Vec<_>>>()?;
    let pairs = cat.pairs.iter().map(|p| verify_pair(cat, p)).collect::<Result<Vec<_>>>()?;
    let min_of = |kind: CodeKind| {
        entries
            .iter()
            .filter(|r| r.kind == kind)
            .min_by(|a, b| a.theta.total_cmp(&b.theta))
            .map(|r| (r.id.clone(), r.theta))
    };
    Ok(CatalogReport { min_theta_n: min_of(CodeKind::Block), min_theta_mh: min_of(CodeKind::Convolutional), entries, pairs })
}

/// Verifies the built-in catalog.
pub fn verify_catalog(opts: &VerifyOptions) -> Result<CatalogReport> {
    verify(&Catalog::builtin()?, opts)
}
