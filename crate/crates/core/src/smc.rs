//! Sequentially-multiplied-columns (SMC) exponent matrices and the greedy
//! search for the column multipliers and the smallest lifting degree.
//!
//! An SMC matrix has the shape `[0 | P1 | g_2 P1 | ... | g_{n-1} P1]` with
//! products taken mod `N`. The seed column `P1` starts with `0, 1` and its
//! remaining entries increase strictly inside `2..N`; the multipliers
//! `g_j` increase strictly inside `2..N` as well.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{girth, CycleSearch, Girth, DEFAULT_GIRTH_CAP};
use crate::error::{Error, Result};
use crate::exponent::{ExponentMatrix, Lifting};

/// How many seed columns are tried at each lifting degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum P1Strategy {
    /// Every admissible seed column, in lexicographic order.
    #[default]
    Exhaustive,
    /// Only the first seed column that is cycle-free at this `N`.
    FirstFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmcSearchConfig {
    pub rows: usize,
    pub cols: usize,
    pub target_girth: usize,
    pub n_min: u64,
    pub n_max: u64,
    pub p1_strategy: P1Strategy,
    /// Maximum number of column checks. Exceeding it stops the search at a
    /// reproducible point.
    pub node_budget: Option<u64>,
    /// Wall-clock limit. Unlike the node budget, where it cuts depends on the machine.
    pub time_limit: Option<Duration>,
}

impl SmcSearchConfig {
    pub fn new(rows: usize, cols: usize, target_girth: usize, n_min: u64, n_max: u64) -> Self {
        Self {
            rows,
            cols,
            target_girth,
            n_min,
            n_max,
            p1_strategy: P1Strategy::Exhaustive,
            node_budget: None,
            time_limit: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if ![6, 8, 10, 12].contains(&self.target_girth) {
            return Err(Error::param(format!("target girth must be 6, 8, 10 or 12, got {}", self.target_girth)));
        }
        if self.rows < 2 {
            return Err(Error::param("SMC matrices need at least two rows"));
        }
        if self.rows >= self.cols {
            return Err(Error::param(format!("need rows < cols, got {} x {}", self.rows, self.cols)));
        }
        if self.n_min < self.cols as u64 {
            return Err(Error::param(format!("every N must satisfy cols <= N; n_min = {} < {}", self.n_min, self.cols)));
        }
        if self.n_min > self.n_max {
            return Err(Error::param("empty lifting-degree range"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmcResult {
    pub lifting: u64,
    pub p1: Vec<u64>,
    pub gammas: Vec<u64>,
    pub matrix: ExponentMatrix,
    pub achieved_girth: Girth,
}

/// Best partial construction seen before a budget ran out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialDesign {
    pub lifting: u64,
    pub p1: Vec<u64>,
    pub gammas: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found(SmcResult),
    /// Every `N` in the range was scanned without success.
    NotFound { nodes: u64 },
    /// The budget ran out before `next_lifting` was finished.
    BudgetExhausted { next_lifting: u64, nodes: u64, best: Option<PartialDesign> },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&SmcResult> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            _ => None,
        }
    }
}

/// Result of one greedy run at fixed `(N, P1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GreedyOutcome {
    Success(Vec<u64>),
    /// The seed submatrix `[0 | P1]` already has a short cycle at this `N`.
    SeedRejected,
    /// No multiplier works for column `column`; `placed` are the ones chosen before it.
    Exhausted { column: usize, placed: Vec<u64> },
}

fn check_p1(n: u64, p1: &[u64]) -> Result<()> {
    if p1.len() < 2 || p1[0] != 0 || p1[1] != 1 {
        return Err(Error::param("seed column must start with 0, 1"));
    }
    if p1.windows(2).skip(1).any(|w| w[0] >= w[1]) || p1.last().is_some_and(|&x| x >= n) {
        return Err(Error::param(format!("seed column entries must increase strictly below N = {n}")));
    }
    Ok(())
}

fn check_gammas(n: u64, gammas: &[u64]) -> Result<()> {
    if gammas.iter().any(|&g| g < 2 || g >= n) {
        return Err(Error::param(format!("multipliers must lie in 2..{n}")));
    }
    if gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("multipliers must increase strictly"));
    }
    Ok(())
}

fn scaled(n: u64, p1: &[u64], gamma: u64) -> impl Iterator<Item = u64> + '_ {
    p1.iter().map(move |&x| ((x as u128 * gamma as u128) % n as u128) as u64)
}

/// Assembles `[0 | P1 | g_2 P1 | ... | g_{n-1} P1]` mod `n`.
pub fn assemble_smc(n: u64, p1: &[u64], gammas: &[u64]) -> Result<ExponentMatrix> {
    check_p1(n, p1)?;
    check_gammas(n, gammas)?;
    let rows = p1.len();
    let cols = gammas.len() + 2;
    let mut entries = vec![0; rows * cols];
    let columns = std::iter::once(1).chain(gammas.iter().copied());
    for (j, g) in columns.enumerate() {
        for (i, v) in scaled(n, p1, g).enumerate() {
            entries[i * cols + j + 1] = v;
        }
    }
    ExponentMatrix::new(rows, cols, entries, Lifting::Finite(n))
}

/// `true` when `[0 | P1]` has no strictly avoidable cycle of length
/// `<= target_girth - 2`.
pub fn seed_column_ok(p1: &[u64], n: u64, target_girth: usize) -> Result<bool> {
    check_p1(n, p1)?;
    let rows: Vec<[u64; 2]> = p1.iter().map(|&x| [0, x]).collect();
    let seed = ExponentMatrix::from_rows(&rows, Lifting::Unbounded)?;
    Ok(girth(&seed, target_girth - 2)? == Girth::GreaterThan(target_girth - 2))
}

/// Picks, column by column, the smallest multiplier that creates no cycle
/// shorter than the target girth at lifting `n`. Only cycles through the new
/// column are checked since the earlier columns were already clean.
pub fn greedy_gamma_search(config: &SmcSearchConfig, n: u64, p1: &[u64]) -> Result<GreedyOutcome> {
    config.validate()?;
    if p1.len() != config.rows {
        return Err(Error::Dimension { expected: config.rows, actual: p1.len() });
    }
    check_p1(n, p1)?;
    Ok(greedy(config, n, p1).0)
}

/// Greedy run returning the outcome and the number of column checks made.
fn greedy(config: &SmcSearchConfig, n: u64, p1: &[u64]) -> (GreedyOutcome, u64) {
    let rows = config.rows;
    let cols = config.cols;
    let cap = config.target_girth - 2;
    let mut entries = vec![0u64; rows * cols];
    let set_col = |entries: &mut Vec<u64>, j: usize, g: u64| {
        for (i, v) in scaled(n, p1, g).enumerate() {
            entries[i * cols + j] = v;
        }
    };
    let clean = |entries: &Vec<u64>, j: usize| {
        let p = ExponentMatrix::new(rows, cols, entries.clone(), Lifting::Finite(n)).expect("entries reduced mod N");
        CycleSearch::with_col_limit(&p, j + 1).shortest_through(j, cap).is_none()
    };

    let mut nodes = 1;
    set_col(&mut entries, 1, 1);
    if !clean(&entries, 1) {
        return (GreedyOutcome::SeedRejected, nodes);
    }
    let mut gammas = Vec::with_capacity(cols.saturating_sub(2));
    let mut lo = 2;
    for j in 2..cols {
        let mut chosen = None;
        for g in lo..n {
            nodes += 1;
            set_col(&mut entries, j, g);
            if clean(&entries, j) {
                chosen = Some(g);
                break;
            }
        }
        match chosen {
            Some(g) => {
                gammas.push(g);
                lo = g + 1;
            }
            None => return (GreedyOutcome::Exhausted { column: j, placed: gammas }, nodes),
        }
    }
    (GreedyOutcome::Success(gammas), nodes)
}

/// `k`-combinations of `lo..hi` in lexicographic order.
fn combinations(lo: u64, hi: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let mut cur: Option<Vec<u64>> = if hi.saturating_sub(lo) >= k as u64 {
        Some((0..k as u64).map(|i| lo + i).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < hi - (k - i) as u64 {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

const CHUNK: usize = 64;

/// Scans `N` upwards and calls `on_success` for every successful `(N, P1)` in
/// search order until it returns `false`. Work inside one chunk of seed
/// columns runs in parallel; results are consumed in order, so the output
/// and the budget cut-off do not depend on scheduling.
fn scan(config: &SmcSearchConfig, mut on_success: impl FnMut(SmcResult) -> bool) -> Result<SearchOutcome> {
    config.validate()?;
    let started = Instant::now();
    let mut nodes = 0u64;
    let mut best: Option<PartialDesign> = None;
    let mut best_depth = 0usize;

    for n in config.n_min..=config.n_max {
        let mut seeds = combinations(2, n, config.rows - 2).map(|rest| {
            let mut p1 = vec![0, 1];
            p1.extend(rest);
            p1
        });
        let mut seed_found = false;
        loop {
            let chunk: Vec<Vec<u64>> = seeds.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let runs: Vec<(GreedyOutcome, u64)> = chunk.par_iter().map(|p1| greedy(config, n, p1)).collect();
            for (p1, (outcome, used)) in chunk.into_iter().zip(runs) {
                if config.node_budget.is_some_and(|b| nodes + used > b)
                    || config.time_limit.is_some_and(|t| started.elapsed() > t)
                {
                    return Ok(SearchOutcome::BudgetExhausted { next_lifting: n, nodes, best });
                }
                nodes += used;
                match outcome {
                    GreedyOutcome::Success(gammas) => {
                        debug_assert!(seed_column_ok(&p1, n, config.target_girth).unwrap_or(false));
                        let matrix = assemble_smc(n, &p1, &gammas)?;
                        let achieved_girth = girth(&matrix, DEFAULT_GIRTH_CAP.max(config.target_girth))?;
                        debug_assert!(achieved_girth.at_least(config.target_girth));
                        let result = SmcResult { lifting: n, p1, gammas, matrix, achieved_girth };
                        if !on_success(result) {
                            return Ok(SearchOutcome::NotFound { nodes });
                        }
                        seed_found = true;
                    }
                    GreedyOutcome::Exhausted { placed, .. } => {
                        seed_found = true;
                        if best.is_none() || placed.len() > best_depth {
                            best_depth = placed.len();
                            best = Some(PartialDesign { lifting: n, p1, gammas: placed });
                        }
                    }
                    GreedyOutcome::SeedRejected => {}
                }
                if seed_found && config.p1_strategy == P1Strategy::FirstFound {
                    break;
                }
            }
            if seed_found && config.p1_strategy == P1Strategy::FirstFound {
                break;
            }
        }
    }
    Ok(SearchOutcome::NotFound { nodes })
}

/// Smallest lifting degree in the configured range admitting an SMC matrix
/// of the target girth under the greedy multiplier choice, scanning `N`
/// upwards and seed columns lexicographically.
pub fn find_min_lifting(config: &SmcSearchConfig) -> Result<SearchOutcome> {
    let mut found = None;
    let outcome = scan(config, |r| {
        found = Some(r);
        false
    })?;
    Ok(match found {
        Some(r) => SearchOutcome::Found(r),
        None => outcome,
    })
}

/// Every successful `(N, P1)` in the range, in search order.
pub fn find_all(config: &SmcSearchConfig) -> Result<(Vec<SmcResult>, SearchOutcome)> {
    let mut all = Vec::new();
    let outcome = scan(config, |r| {
        all.push(r);
        true
    })?;
    Ok((all, outcome))
}
