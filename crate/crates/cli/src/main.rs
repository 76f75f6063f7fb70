//! `compact-ldpc` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use compact_ldpc::catalog::{verify, CodeKind, VerifyOptions};
use compact_ldpc::coupled::{reduce_memory, unwrap_qc, ConvolutionalCode};
use compact_ldpc::cycles::{girth, shortest_cycle};
use compact_ldpc::decoder::{DecoderConfig, SlidingWindowConfig};
use compact_ldpc::metrics::{theta_mh, theta_n, IavgSource, LatencyReport, RateKind};
use compact_ldpc::sim::{run_block_sim, run_sc_sim, ChannelConfig, SimOptions, SimResult, SnrConvention, StopRule, Transmission};
use compact_ldpc::smc::{find_all, find_min_lifting, P1Strategy, SearchOutcome, SmcResult, SmcSearchConfig};
use compact_ldpc::{effective_rate, Catalog, ExponentMatrix, Lifting, Llr, Rational64};
use serde::Serialize;
use serde_json::{json, Value};

const GIRTH_CAP: usize = 12;

#[derive(Parser)]
#[command(name = "compact-ldpc", version, about = "Design, verify and simulate compact QC-LDPC and SC-LDPC codes")]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for the smallest lifting degree with an SMC exponent matrix of the target girth.
    Design(DesignArgs),
    /// Check the girth and parameters of an exponent-matrix file.
    Verify(VerifyArgs),
    /// Read a block code as a convolutional code.
    Unwrap(UnwrapArgs),
    /// Monte Carlo BER/BLER over BPSK/AWGN.
    Simulate(SimulateArgs),
    /// Latency and complexity figures, optionally compared between two codes.
    Metrics(MetricsArgs),
    /// The built-in catalog of published codes.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long)]
    girth: usize,
    /// Smallest lifting degree tried [default: cols].
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: u64,
    /// Maximum number of column checks.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, value_enum, default_value_t = P1Arg::Exhaustive)]
    p1: P1Arg,
    /// Output file, or a directory when combined with --all.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Keep scanning and report every success, not just the first.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum P1Arg {
    Exhaustive,
    FirstFound,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    file: PathBuf,
    /// Required girth; the check passes when the girth is at least this.
    #[arg(long)]
    girth: Option<usize>,
    /// Also compute the effective rate of a block code.
    #[arg(long)]
    rate: bool,
}

#[derive(Args)]
struct UnwrapArgs {
    #[arg(long)]
    file: PathBuf,
    /// Apply row and column offsets minimizing the memory order.
    #[arg(long)]
    reduce_memory: bool,
    /// Write the convolutional exponent matrix here.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    file: PathBuf,
    /// Full BP on the QC block code (default).
    #[arg(long, conflicts_with = "sc")]
    block: bool,
    /// Sliding-window decoding of a terminated convolutional chain.
    #[arg(long)]
    sc: bool,
    /// Window size as a multiple of m_h + 1.
    #[arg(long, conflicts_with = "window")]
    alpha: Option<f64>,
    /// Window size in blocks.
    #[arg(long)]
    window: Option<usize>,
    /// Chain length in blocks, tail included.
    #[arg(long, default_value_t = 100)]
    chain_len: usize,
    /// Maximum iterations per codeword, or exact iterations per window position.
    #[arg(long)]
    iters: Option<usize>,
    /// SNR sweep `start:stop:step` in dB, or a single value.
    #[arg(long, default_value = "1:3:0.5")]
    snr: String,
    #[arg(long, value_enum, default_value_t = ConventionArg::Ebn0)]
    convention: ConventionArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    stop_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    stop_bits: u64,
    #[arg(long)]
    stop_blocks: Option<u64>,
    #[arg(long, value_enum, default_value_t = AlgoArg::SumProduct)]
    decoder: AlgoArg,
    /// Min-sum scaling factor.
    #[arg(long, default_value_t = 0.75)]
    scale: f64,
    #[arg(long, value_enum, default_value_t = PrecisionArg::F64)]
    precision: PrecisionArg,
    /// Send encoded random messages instead of the all-zero codeword.
    #[arg(long)]
    random_codewords: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Ebn0,
    Esn0,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    SumProduct,
    MinSum,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    F32,
    F64,
}

#[derive(Args)]
struct MetricsArgs {
    /// One or two exponent-matrix files; with two, the first is the new code.
    #[arg(required = true, num_args = 1..=2)]
    files: Vec<PathBuf>,
    /// Sliding-window size factor; enables the SW figures.
    #[arg(long)]
    alpha: Option<f64>,
    /// Average iterations, enables the complexity figures.
    #[arg(long)]
    iavg: Option<f64>,
    /// Print improvement ratios of the first file over the second.
    #[arg(long)]
    compare: bool,
    /// Use (n - m) / n instead of the effective rate for block codes.
    #[arg(long)]
    design_rate: bool,
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Verify {
        /// Also recompute effective rates (slower).
        #[arg(long)]
        rates: bool,
        /// Only this entry.
        #[arg(long)]
        id: Option<String>,
    },
    /// Write the catalog sources, or one entry's matrix to stdout.
    Export {
        #[arg(long, required_unless_present = "id")]
        dir: Option<PathBuf>,
        #[arg(long)]
        id: Option<String>,
    },
}

/// What a subcommand produced: a pass/fail verdict, the JSON payload and the text rendering.
struct Output {
    ok: bool,
    result: Value,
    text: String,
}

impl Output {
    fn new(ok: bool, result: impl Serialize, text: String) -> Result<Self> {
        Ok(Self { ok, result: serde_json::to_value(result)?, text })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.cmd {
        Cmd::Design(_) => "design",
        Cmd::Verify(_) => "verify",
        Cmd::Unwrap(_) => "unwrap",
        Cmd::Simulate(_) => "simulate",
        Cmd::Metrics(_) => "metrics",
        Cmd::Catalog { .. } => "catalog",
    };
    let res = match cli.cmd {
        Cmd::Design(a) => design(a),
        Cmd::Verify(a) => verify_file(a),
        Cmd::Unwrap(a) => unwrap(a),
        Cmd::Simulate(a) => simulate(a, cli.json),
        Cmd::Metrics(a) => metrics(a),
        Cmd::Catalog { cmd } => catalog(cmd),
    };
    match res {
        Ok(out) => {
            if cli.json {
                println!("{}", json!({ "command": name, "ok": out.ok, "result": out.result }));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "command": name, "ok": false, "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::FAILURE
        }
    }
}

fn read_matrix(path: &Path) -> Result<ExponentMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ExponentMatrix::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check_shape(p: &ExponentMatrix) -> Result<()> {
    if p.rows() >= p.cols() {
        bail!("need rows < cols, got {} x {}", p.rows(), p.cols());
    }
    if let Lifting::Finite(n) = p.lifting() {
        if (n as usize) < p.cols() {
            bail!("need cols <= N, got cols = {} and N = {n}", p.cols());
        }
    }
    Ok(())
}

fn code_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn design(a: DesignArgs) -> Result<Output> {
    let mut cfg = SmcSearchConfig::new(a.rows, a.cols, a.girth, a.n_min.unwrap_or(a.cols as u64), a.n_max);
    cfg.node_budget = a.budget;
    cfg.time_limit = a.time_limit.map(Duration::from_secs_f64);
    cfg.p1_strategy = match a.p1 {
        P1Arg::Exhaustive => P1Strategy::Exhaustive,
        P1Arg::FirstFound => P1Strategy::FirstFound,
    };
    let (found, outcome) = if a.all {
        find_all(&cfg)?
    } else {
        let o = find_min_lifting(&cfg)?;
        (o.found().cloned().into_iter().collect(), o)
    };

    let mut text = String::new();
    for r in &found {
        text += &format!("N = {}  P1 = {:?}  gammas = {:?}  girth {}\n{}", r.lifting, r.p1, r.gammas, r.achieved_girth, r.matrix.to_text());
    }
    match &outcome {
        SearchOutcome::Found(_) => {}
        SearchOutcome::NotFound { nodes } => {
            text += &format!("no further success for N in [{}, {}] ({nodes} column checks)\n", cfg.n_min, cfg.n_max)
        }
        SearchOutcome::BudgetExhausted { next_lifting, nodes, .. } => {
            text += &format!("budget exhausted at N = {next_lifting} after {nodes} column checks\n")
        }
    }
    if let Some(path) = &a.emit {
        emit_designs(path, &found, a.all)?;
    }
    Output::new(!found.is_empty(), json!({ "found": found, "outcome": outcome }), text)
}

fn emit_designs(path: &Path, found: &[SmcResult], all: bool) -> Result<()> {
    if !all {
        if let Some(r) = found.first() {
            fs::write(path, r.matrix.to_text()).with_context(|| format!("writing {}", path.display()))?;
        }
        return Ok(());
    }
    fs::create_dir_all(path)?;
    let mut per_n = std::collections::BTreeMap::<u64, usize>::new();
    for r in found {
        let k = per_n.entry(r.lifting).or_default();
        let file = path.join(format!("smc-m{}-n{}-N{}-{}.txt", r.matrix.rows(), r.matrix.cols(), r.lifting, k));
        *k += 1;
        fs::write(&file, r.matrix.to_text()).with_context(|| format!("writing {}", file.display()))?;
    }
    Ok(())
}

fn verify_file(a: VerifyArgs) -> Result<Output> {
    let p = read_matrix(&a.file)?;
    check_shape(&p)?;
    let cap = GIRTH_CAP.max(a.girth.unwrap_or(0));
    let g = girth(&p, cap)?;
    let ok = a.girth.is_none_or(|want| g.at_least(want));
    let witness = if ok { None } else { shortest_cycle(&p, cap)? };
    let memory = p.lifting().is_unbounded().then(|| p.max_entry() - p.min_entry());
    let rate = if a.rate && !p.lifting().is_unbounded() { Some(ratio(effective_rate(&p)?)) } else { None };

    let mut text = format!("{} x {}, N = {}, girth {g}", p.rows(), p.cols(), p.lifting());
    if let Some(m) = memory {
        text += &format!(", m_h = {m}");
    }
    if let Some(r) = rate {
        text += &format!(", effective rate {r:.4}");
    }
    text.push('\n');
    if let Some(want) = a.girth {
        text += &format!("{}: girth at least {want}\n", if ok { "PASS" } else { "FAIL" });
    }
    if let Some(w) = &witness {
        text += &format!("shortest cycle: {}\n", w.candidate);
    }
    let result = json!({
        "rows": p.rows(), "cols": p.cols(), "lifting": p.lifting().to_string(),
        "girth": g, "required": a.girth, "memory": memory, "effective_rate": rate,
        "witness": witness, "passed": ok,
    });
    Output::new(ok, result, text)
}

fn convolutional(p: &ExponentMatrix) -> Result<ConvolutionalCode> {
    Ok(if p.lifting().is_unbounded() { ConvolutionalCode::new(p)? } else { unwrap_qc(p)? })
}

fn unwrap(a: UnwrapArgs) -> Result<Output> {
    let p = read_matrix(&a.file)?;
    check_shape(&p)?;
    let plain = convolutional(&p)?;
    let (code, offsets) = if a.reduce_memory {
        let r = reduce_memory(&plain);
        (r.code, Some((r.row_offsets, r.col_offsets)))
    } else {
        (plain.clone(), None)
    };
    let g = code.girth(GIRTH_CAP)?;
    let rate = code.rate();
    let mut text = format!(
        "m_h = {}\nv_s = {}\nrate = {} ({:.4})\ngirth {g}\n",
        code.memory(),
        code.constraint_length(),
        rate,
        *rate.numer() as f64 / *rate.denom() as f64
    );
    if let Some((r, c)) = &offsets {
        text += &format!("m_h before reduction = {}\nrow offsets {r:?}\ncolumn offsets {c:?}\n", plain.memory());
    }
    if let Some(path) = &a.emit {
        fs::write(path, code.base().to_text()).with_context(|| format!("writing {}", path.display()))?;
    } else {
        text += &code.base().to_text();
    }
    let result = json!({
        "memory": code.memory(), "constraint_length": code.constraint_length(),
        "rate": rate.to_string(), "girth": g, "unreduced_memory": plain.memory(),
        "offsets": offsets.map(|(r, c)| json!({ "rows": r, "cols": c })),
        "matrix": code.base().to_text(),
    });
    Output::new(true, result, text)
}

fn parse_snr(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| anyhow!("bad SNR spec {s:?}"))?;
    match parts[..] {
        [x] => Ok(vec![x]),
        [a, b, step] => Ok(ChannelConfig::sweep(a, b, step)?),
        _ => bail!("SNR spec must be `value` or `start:stop:step`, got {s:?}"),
    }
}

fn decoder_cfg<F: Llr>(a: &SimulateArgs, max_iters: usize) -> Result<DecoderConfig<F>> {
    let base = match a.decoder {
        AlgoArg::SumProduct => DecoderConfig::default(),
        AlgoArg::MinSum => DecoderConfig::min_sum(F::from(a.scale).ok_or_else(|| anyhow!("bad scale"))?),
    };
    Ok(DecoderConfig { max_iters, ..base })
}

fn run_sim<F: Llr>(a: &SimulateArgs, p: &ExponentMatrix, channel: &ChannelConfig, stop: &StopRule, opts: &SimOptions) -> Result<SimResult> {
    if a.sc {
        let code = convolutional(p)?;
        let iters = a.iters.unwrap_or(100);
        let sw = match (a.alpha, a.window) {
            (_, Some(w)) => SlidingWindowConfig::with_blocks(w, iters),
            (alpha, None) => SlidingWindowConfig::from_alpha(alpha.unwrap_or(5.0), code.memory(), iters)?,
        };
        Ok(run_sc_sim(&code, channel, &sw, &decoder_cfg::<F>(a, iters)?, a.chain_len, stop, opts)?)
    } else {
        if p.lifting().is_unbounded() {
            bail!("block simulation needs a finite lifting degree; use --sc for convolutional codes");
        }
        if a.alpha.is_some() || a.window.is_some() {
            bail!("--alpha and --window apply to --sc only");
        }
        Ok(run_block_sim(p, channel, &decoder_cfg::<F>(a, a.iters.unwrap_or(100))?, stop, opts)?)
    }
}

fn simulate(a: SimulateArgs, json_mode: bool) -> Result<Output> {
    let p = read_matrix(&a.file)?;
    check_shape(&p)?;
    let channel = ChannelConfig {
        snr_db: parse_snr(&a.snr)?,
        convention: match a.convention {
            ConventionArg::Ebn0 => SnrConvention::EbN0,
            ConventionArg::Esn0 => SnrConvention::EsN0,
        },
        seed: a.seed,
        rate: None,
    };
    let stop = StopRule { min_block_errors: Some(a.stop_errors), max_bits: Some(a.stop_bits), max_blocks: a.stop_blocks };
    let opts = SimOptions {
        code_id: code_id(&a.file),
        transmission: if a.random_codewords { Transmission::RandomCodewords } else { Transmission::AllZero },
        threads: a.threads,
    };
    let result = match a.precision {
        PrecisionArg::F32 => run_sim::<f32>(&a, &p, &channel, &stop, &opts)?,
        PrecisionArg::F64 => run_sim::<f64>(&a, &p, &channel, &stop, &opts)?,
    };
    let csv = result.to_csv();
    let text = match &a.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            if json_mode {
                String::new()
            } else {
                format!("wrote {} points to {}\n", result.points.len(), path.display())
            }
        }
        None => csv,
    };
    Output::new(true, &result, text)
}

#[derive(Serialize)]
struct CodeMetrics {
    file: String,
    bp: Option<LatencyReport<f64>>,
    sw: Option<LatencyReport<f64>>,
    lifting: Option<u64>,
    memory: Option<u64>,
}

fn ratio(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn code_metrics(path: &Path, a: &MetricsArgs) -> Result<CodeMetrics> {
    let p = read_matrix(path)?;
    check_shape(&p)?;
    let (m, n) = (p.rows() as u64, p.cols() as u64);
    let design = (n - m) as f64 / n as f64;
    let (bp_src, sw_src) = (IavgSource::PerCodeword, IavgSource::PerWindowPosition);
    let bp = match p.lifting() {
        Lifting::Finite(big_n) => {
            let (rate, kind) =
                if a.design_rate { (design, RateKind::Design) } else { (ratio(effective_rate(&p)?), RateKind::Effective) };
            Some(LatencyReport::bp(m, n, big_n, rate, kind, a.iavg.map(|i| (i, bp_src)))?)
        }
        Lifting::Unbounded => None,
    };
    let code = convolutional(&p)?;
    let sw = match (a.alpha, p.lifting()) {
        (Some(alpha), _) => Some(LatencyReport::sw(m, n, code.memory(), alpha, design, RateKind::Design, a.iavg.map(|i| (i, sw_src)))?),
        (None, Lifting::Unbounded) => bail!("{}: convolutional codes need --alpha", path.display()),
        (None, Lifting::Finite(_)) => None,
    };
    Ok(CodeMetrics {
        file: path.display().to_string(),
        bp,
        sw,
        lifting: p.lifting().finite(),
        memory: p.lifting().is_unbounded().then(|| code.memory()).or(a.alpha.map(|_| code.memory())),
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.4}"))
}

fn metrics(a: MetricsArgs) -> Result<Output> {
    if a.compare && a.files.len() != 2 {
        bail!("--compare needs exactly two files");
    }
    let codes = a.files.iter().map(|f| code_metrics(f, &a)).collect::<Result<Vec<_>>>()?;
    let mut text = format!("{:<28} {:<6} {:>12} {:>14} {:>8}\n", "file", "scheme", "latency", "complexity", "rate");
    for c in &codes {
        for r in [&c.bp, &c.sw].into_iter().flatten() {
            text += &format!(
                "{:<28} {:<6} {:>12} {:>14} {:>8.4}\n",
                c.file,
                format!("{:?}", r.scheme).to_uppercase(),
                format!("{}", r.latency_bits),
                fmt_opt(r.per_bit_complexity),
                r.inputs.rate
            );
        }
    }
    let mut thetas = serde_json::Map::new();
    if a.compare {
        let (new, old) = (&codes[0], &codes[1]);
        if let (Some(x), Some(y)) = (new.lifting, old.lifting) {
            let t: f64 = theta_n(x, y)?;
            thetas.insert("theta_n".into(), json!(t));
            text += &format!("theta_N = {x}/{y} = {t:.4}\n");
        }
        if let (Some(x), Some(y)) = (new.memory, old.memory) {
            let t: f64 = theta_mh(x, y);
            thetas.insert("theta_mh".into(), json!(t));
            text += &format!("theta_mh = ({x}+1)/({y}+1) = {t:.4}\n");
        }
        if thetas.is_empty() {
            bail!("nothing to compare: give two block codes, or two convolutional codes with --alpha");
        }
    }
    Output::new(true, json!({ "codes": codes, "thetas": thetas }), text)
}

fn catalog(cmd: CatalogCmd) -> Result<Output> {
    let cat = Catalog::builtin()?;
    match cmd {
        CatalogCmd::List => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for e in &cat.entries {
                let param = match e.kind {
                    CodeKind::Block => format!("N={}", e.lifting.unwrap_or(0)),
                    CodeKind::Convolutional => format!("m_h={}", e.memory.unwrap_or(0)),
                };
                text += &format!("{:<16} {:>2} x {:<2} {:<10} girth {}\n", e.id, e.rows(), e.cols(), param, e.claimed_girth);
                rows.push(json!({ "id": e.id, "kind": e.kind, "rows": e.rows(), "cols": e.cols(),
                    "lifting": e.lifting, "memory": e.memory, "girth": e.claimed_girth, "reference": e.reference }));
            }
            for p in &cat.pairs {
                text += &format!("{:<16} pair: {} m_h {} vs {}\n", p.id, p.new, p.new_memory, p.reference_memory);
            }
            Output::new(true, json!({ "entries": rows, "pairs": cat.pairs }), text)
        }
        CatalogCmd::Verify { rates, id } => {
            let cat = match id {
                Some(id) => {
                    let e = cat.get(&id).ok_or_else(|| anyhow!("unknown catalog id {id}"))?.clone();
                    Catalog { entries: vec![e], pairs: Vec::new() }
                }
                None => cat,
            };
            let report = verify(&cat, &VerifyOptions { rates })?;
            let mut text = String::new();
            for e in &report.entries {
                let verdict = if e.passed { "PASS" } else { "FAIL" };
                text += &format!("{verdict} {:<16} girth {} (claimed {}), {}", e.id, e.girth, e.claimed_girth, e.parameter_detail);
                if let Some(r) = e.effective_rate {
                    text += &format!(", rate {r:.4}");
                }
                if let Some(n) = &e.rate_note {
                    text += &format!(" [{n}]");
                }
                text += &format!(", theta {:.4}\n", e.theta);
                if let Some(w) = &e.witness {
                    text += &format!("     shortest cycle: {}\n", w.candidate);
                }
            }
            for p in &report.pairs {
                text += &format!("{} {:<16} theta_mh {:.4}\n", if p.passed { "PASS" } else { "FAIL" }, p.id, p.theta);
            }
            for (label, v) in [("theta_N", &report.min_theta_n), ("theta_mh", &report.min_theta_mh)] {
                if let Some((id, t)) = v {
                    text += &format!("smallest {label}: {t:.4} ({id})\n");
                }
            }
            let passed = report.passed();
            text += if passed { "catalog verified\n" } else { "catalog verification FAILED\n" };
            Output::new(passed, &report, text)
        }
        CatalogCmd::Export { dir, id } => {
            if let Some(id) = id {
                let e = cat.get(&id).ok_or_else(|| anyhow!("unknown catalog id {id}"))?;
                let body = e.matrix.to_text();
                if let Some(dir) = dir {
                    fs::create_dir_all(&dir)?;
                    let path = dir.join(format!("{id}.txt"));
                    fs::write(&path, &body)?;
                    return Output::new(true, json!({ "written": [path] }), format!("wrote {}\n", path.display()));
                }
                return Output::new(true, json!({ "id": id, "matrix": body }), body);
            }
            let dir = dir.expect("clap requires --dir without --id");
            fs::create_dir_all(&dir)?;
            let mut written = Vec::new();
            for (name, text) in Catalog::builtin_sources() {
                let path = dir.join(name);
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                written.push(path);
            }
            let text = format!("wrote {} files to {}\n", written.len(), dir.display());
            Output::new(true, json!({ "written": written }), text)
        }
    }
}
