//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use compact_ldpc::catalog::{verify_catalog, CodeKind, VerifyOptions};
use compact_ldpc::coupled::{chain_matrix, reduce_memory, TerminatedChain};
use compact_ldpc::cycles::{alternating_sum, enumerate_cycles, girth, CycleClass};
use compact_ldpc::decoder::{bp_decode, sliding_window_decode, BpDecoder, DecoderConfig, SlidingWindowConfig};
use compact_ldpc::metrics::{constraint_length, f_complexity, theta_mh};
use compact_ldpc::sim::{
    awgn_llrs, run_block_sim, run_sc_sim, ChannelConfig, SimOptions, SnrConvention, StopRule,
};
use compact_ldpc::smc::{find_min_lifting, SearchOutcome, SmcSearchConfig};
use compact_ldpc::{expand_block, tanner_girth_oracle, Catalog, ConvolutionalCode, ExponentMatrix, Lifting};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn catalog_kind(kind: CodeKind) -> Outcome {
    let t = Instant::now();
    let report = verify_catalog(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    let rows: Vec<_> = report.entries.iter().filter(|e| e.kind == kind).collect();
    let failed: Vec<_> = rows.iter().filter(|e| !e.passed).map(|e| format!("{} ({}, {})", e.id, e.girth, e.parameter_detail)).collect();
    ensure(failed.is_empty(), || format!("failing entries: {}", failed.join("; ")))?;
    let want = match kind {
        CodeKind::Block => 28,
        CodeKind::Convolutional => 28,
    };
    ensure(rows.len() == want, || format!("expected {want} entries, found {}", rows.len()))?;
    within(t, Duration::from_secs(300))?;
    Ok(format!("{} entries at claimed girth and parameters in {:.2?}", rows.len(), t.elapsed()))
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lifting: Lifting, hi: u64) -> ExponentMatrix {
    let entries = (0..m * n).map(|_| rng.random_range(0..hi)).collect();
    ExponentMatrix::new(m, n, entries, lifting).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut mismatches = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    let trials = 150;
    for _ in 0..trials {
        let m = rng.random_range(2..=3);
        let n = rng.random_range(3..=5);
        let big_n = rng.random_range(5..=16);
        let p = random_matrix(&mut rng, m, n, Lifting::Finite(big_n), big_n);
        let a = girth(&p, 12).map_err(|e| e.to_string())?;
        let b = tanner_girth_oracle(&expand_block(&p).unwrap(), 12).map_err(|e| e.to_string())?;
        *seen.entry(a.to_string()).or_insert(0) += 1;
        if a != b {
            mismatches.push(format!("{p:?}: {a} vs {b}"));
        }
    }
    ensure(mismatches.is_empty(), || format!("{} mismatches, first {}", mismatches.len(), mismatches[0]))?;
    within(t, Duration::from_secs(120))?;
    Ok(format!("{trials} random matrices, 0 mismatches, girth histogram {seen:?}, {:.2?}", t.elapsed()))
}

fn smc_minimality() -> Outcome {
    let t = Instant::now();
    let mut found = Vec::new();
    for (m, n, g, want) in [(3usize, 4usize, 10usize, 37u64), (3, 5, 10, 61), (3, 4, 12, 73)] {
        let cfg = SmcSearchConfig::new(m, n, g, n as u64, want + 20);
        match find_min_lifting(&cfg).map_err(|e| e.to_string())? {
            SearchOutcome::Found(r) => {
                ensure(r.lifting == want, || format!("{m}x{n} g={g}: first success at N={}, expected {want}", r.lifting))?;
                let check = girth(&r.matrix, 12).map_err(|e| e.to_string())?;
                ensure(check.at_least(g), || format!("{m}x{n}: design has girth {check}"))?;
                found.push(format!("{m}x{n}/g{g}->N={}", r.lifting));
            }
            other => return Err(format!("{m}x{n} g={g}: {other:?}")),
        }
    }
    within(t, Duration::from_secs(1800))?;
    Ok(format!("{} in {:.2?}", found.join(", "), t.elapsed()))
}

fn offset_invariance() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut compared = 0usize;
    for trial in 0..1000 {
        let m = rng.random_range(2..=4);
        let n = rng.random_range(m + 1..=m + 3);
        let unbounded = rng.random_bool(0.5);
        let (lifting, hi) = if unbounded {
            (Lifting::Unbounded, 40)
        } else {
            let big_n = rng.random_range(5..=60);
            (Lifting::Finite(big_n), big_n)
        };
        let p = random_matrix(&mut rng, m, n, lifting, hi);
        let delta = if unbounded { rng.random_range(0..50) } else { rng.random_range(-100..100) };
        let q = if rng.random_bool(0.5) {
            p.offset_row(rng.random_range(0..m), delta)
        } else {
            p.offset_col(rng.random_range(0..n), delta)
        }
        .map_err(|e| e.to_string())?;
        for w in enumerate_cycles(&p, 8).map_err(|e| e.to_string())? {
            let c = &w.candidate;
            let s = alternating_sum(&q, &c.cols, &c.rows);
            let same = match lifting {
                Lifting::Finite(big_n) => (s - c.sum).rem_euclid(big_n as i64) == 0,
                Lifting::Unbounded => s == c.sum,
            };
            ensure(same, || format!("trial {trial}: sum {} became {s} for {c}", c.sum))?;
            // Reduction mod N may move a zero sum to a multiple of N, so only
            // presence is compared for finite liftings.
            let class = CycleClass::of(s, lifting);
            let kept = if unbounded { class == w.class } else { class.is_present() == w.is_present() };
            ensure(kept, || format!("trial {trial}: class changed for {c}"))?;
            compared += 1;
        }
    }

    let mut reduced = 0;
    for trial in 0..100 {
        let a = rng.random_range(4..=6);
        let p = random_matrix(&mut rng, 3, a, Lifting::Unbounded, 30);
        let code = ConvolutionalCode::new(&p).unwrap();
        let out = reduce_memory(&code);
        ensure(out.code.memory() <= code.memory(), || format!("base {trial}: m_h grew"))?;
        let (g0, g1) = (girth(&p, 12).unwrap(), girth(out.code.base(), 12).unwrap());
        ensure(g0 == g1, || format!("base {trial}: girth {g0} became {g1}"))?;
        if out.code.memory() < code.memory() {
            reduced += 1;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!(
        "1000 offset pairs, {compared} cycle sums unchanged; 100 reduced bases keep girth ({reduced} shrank m_h), {:.2?}",
        t.elapsed()
    ))
}

fn metrics_exactness() -> Outcome {
    let th = theta_mh::<f64>(297, 652);
    ensure((th - 0.4563).abs() <= 1e-4, || format!("theta_mh = {th}"))?;
    ensure(constraint_length(297, 8) == 2384, || "v_s(C1)".into())?;
    ensure(constraint_length(652, 8) == 5224, || "v_s(C2)".into())?;
    for (x, r, direct) in [(3u64, 0.263f64, 8.0 * (8.0 * 3.0 + 12.0 * 0.263 - 11.0) + 3.0), (1, 11.0 / 12.0, 65.0), (4, 0.5, 220.0)] {
        let f = f_complexity(x, r).map_err(|e| e.to_string())?;
        ensure(f == direct, || format!("f({x}, {r}) = {f}, direct {direct}"))?;
    }
    ensure((f_complexity(3, 0.263f64).unwrap() - 132.248).abs() < 1e-12, || "f(3, 0.263)".into())?;
    Ok(format!("theta_mh(297, 652) = {th:.6}, v_s = 2384 / 5224, f spot values exact"))
}

fn decoder_sanity() -> Outcome {
    let cat = Catalog::builtin().map_err(|e| e.to_string())?;
    let code = cat.get("cc-c3-g10-a4").unwrap().as_convolutional().unwrap();
    let chain_len = 30;
    let chain = TerminatedChain::new(&code, chain_len).unwrap();
    let h = chain_matrix(&code, chain_len).unwrap();
    let iters = 20;
    let cfg = DecoderConfig::<f64>::default();
    let full_cfg = DecoderConfig { max_iters: iters, early_stop: false, ..cfg };
    let sw = SlidingWindowConfig::with_blocks(chain_len, iters);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut llr = Vec::new();
    let mut nontrivial = 0;
    for i in 0..50 {
        awgn_llrs::<f64, _>(&vec![0u8; chain.symbols()], 5.0, &mut rng, &mut llr);
        let a = sliding_window_decode(&code, &llr, &sw, &cfg).map_err(|e| e.to_string())?;
        let mut term = llr.clone();
        chain.terminate(&mut term, cfg.llr_clip);
        let b = bp_decode(&h, &term, &full_cfg).map_err(|e| e.to_string())?;
        ensure(a.decisions == b.decisions, || format!("chain {i}: window and full BP disagree"))?;
        if a.decisions.iter().any(|&x| x != 0) {
            nontrivial += 1;
        }
    }

    let p = cat.get("qc-m3-g10-n4").unwrap().matrix.clone();
    let hb = expand_block(&p).unwrap();
    let mut dec = BpDecoder::new(&hb, DecoderConfig::<f64> { max_iters: 30, ..Default::default() }).unwrap();
    let mut fired = 0;
    for i in 0..1000 {
        let sigma2 = 0.3 + 0.6 * (i % 10) as f64 / 10.0;
        awgn_llrs::<f64, _>(&vec![0u8; hb.cols()], sigma2, &mut rng, &mut llr);
        let out = dec.decode(&llr).map_err(|e| e.to_string())?;
        if out.syndrome_ok {
            fired += 1;
            ensure(hb.is_codeword(&out.decisions).unwrap(), || format!("decode {i}: reported success on a non-codeword"))?;
        }
    }
    ensure(fired > 0, || "early stop never fired".into())?;

    let ch = ChannelConfig::new(vec![10.0], 0x5eed_0004);
    let r = run_block_sim(&p, &ch, &cfg, &StopRule::blocks(1000), &SimOptions::default()).map_err(|e| e.to_string())?;
    let pt = r.points[0];
    ensure(pt.blocks == 1000 && pt.bit_errors == 0, || format!("10 dB: {} bit errors in {} blocks", pt.bit_errors, pt.blocks))?;
    Ok(format!(
        "(a) 50 chains bit-identical ({nontrivial} with residual errors) (b) {fired} early stops all codewords (c) 0 bit errors in 1000 blocks at 10 dB"
    ))
}

fn window_ordering() -> Outcome {
    let t = Instant::now();
    let cat = Catalog::builtin().map_err(|e| e.to_string())?;
    let code = cat.get("cc-c3-g10-a4").unwrap().as_convolutional().unwrap();
    ensure(code.memory() == 11, || "unexpected memory".into())?;
    let chain_len = 100;
    let chains = 80;
    let blocks_per_chain = (chain_len - code.memory() as usize) as u64;
    let ch = ChannelConfig::new(vec![3.5], 0x5eed_0005);
    let cfg = DecoderConfig::<f64>::default();
    let mut bers = Vec::new();
    let mut errs = Vec::new();
    for alpha in [1.0, 2.0, 5.0] {
        let sw = SlidingWindowConfig::from_alpha(alpha, code.memory(), 50).unwrap();
        let r = run_sc_sim(&code, &ch, &sw, &cfg, chain_len, &StopRule::blocks(chains * blocks_per_chain), &SimOptions::default())
            .map_err(|e| e.to_string())?;
        bers.push(r.points[0].ber());
        errs.push(r.points[0].block_errors);
    }
    ensure(errs.iter().all(|&e| e >= 200), || format!("too few block errors: {errs:?}"))?;
    ensure(bers[2] <= bers[1] && bers[1] <= bers[0], || format!("BER not ordered: {bers:?}"))?;
    within(t, Duration::from_secs(3600))?;
    Ok(format!(
        "Eb/N0 3.5 dB, {chains} chains of {chain_len}: BER a=1 {:.3e} >= a=2 {:.3e} >= a=5 {:.3e}, block errors {errs:?}, {:.1?}",
        bers[0],
        bers[1],
        bers[2],
        t.elapsed()
    ))
}

fn determinism() -> Outcome {
    let cat = Catalog::builtin().map_err(|e| e.to_string())?;
    let p = cat.get("qc-m3-g10-n4").unwrap().matrix.clone();
    let ch = ChannelConfig::new(vec![1.0, 2.0, 3.0], 0x5eed_0006);
    let stop = StopRule { min_block_errors: Some(40), max_bits: Some(2_000_000), max_blocks: None };
    let cfg = DecoderConfig::<f32>::default();
    let mut csvs = Vec::new();
    for threads in [1, 2, 5] {
        let opts = SimOptions { code_id: "qc-m3-g10-n4".into(), threads: Some(threads), ..Default::default() };
        csvs.push(run_block_sim(&p, &ch, &cfg, &stop, &opts).map_err(|e| e.to_string())?.to_csv());
    }
    ensure(csvs.windows(2).all(|w| w[0] == w[1]), || "block CSV differs across thread counts".into())?;

    let code = cat.get("cc-c3-g10-a4").unwrap().as_convolutional().unwrap();
    let sw = SlidingWindowConfig::from_alpha(2.0, code.memory(), 10).unwrap();
    let ch = ChannelConfig { snr_db: vec![0.0], convention: SnrConvention::EsN0, seed: 0x5eed_0007, rate: None };
    let mut sc = Vec::new();
    for threads in [1, 3] {
        let opts = SimOptions { code_id: "cc-c3-g10-a4".into(), threads: Some(threads), ..Default::default() };
        sc.push(
            run_sc_sim(&code, &ch, &sw, &DecoderConfig::<f64>::default(), 60, &StopRule::blocks(300), &opts)
                .map_err(|e| e.to_string())?
                .to_csv(),
        );
    }
    ensure(sc[0] == sc[1], || "sliding-window CSV differs across thread counts".into())?;
    Ok("block (1/2/5 threads) and sliding-window (1/3 threads) CSV byte-identical".into())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("catalog-block-girth", || catalog_kind(CodeKind::Block)),
        ("catalog-convolutional-girth-memory", || catalog_kind(CodeKind::Convolutional)),
        ("oracle-equivalence", oracle_equivalence),
        ("smc-minimal-lifting", smc_minimality),
        ("offset-invariance", offset_invariance),
        ("metrics-exactness", metrics_exactness),
        ("decoder-sanity", decoder_sanity),
        ("window-size-ordering", window_ordering),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
