use std::path::Path;
use std::process::{Command, Output};

use compact_ldpc::metrics::LatencyReport;
use compact_ldpc::SimResult;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compact-ldpc")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn export(dir: &Path) {
    let o = run(&["catalog", "export", "--dir", dir.to_str().unwrap()]);
    assert!(o.status.success());
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn catalog_verifies() {
    let o = run(&["catalog", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 57);
    assert!(!text.contains("FAIL"));
    let (code, v) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 56);
}

#[test]
fn verify_pass_and_shape_error() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let o = run(&["verify", "--file", &path(dir.path(), "qc-m3-g10-n5.txt"), "--girth", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));

    let o = run(&["verify", "--file", &path(dir.path(), "qc-m3-g10-n5.txt"), "--girth", "12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("shortest cycle"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 5 4\n0 0 0 0 0\n0 1 2 3 3\n0 2 3 1 1\n").unwrap();
    let o = run(&["verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cols <= N"));
    let (code, v) = json(&["verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["ok"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--file", "x", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--file", "x", "--sc", "--block"]).status.code(), Some(2));
}

#[test]
fn design_emits_minimal_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.txt");
    let o = run(&["design", "--rows", "3", "--cols", "4", "--girth", "10", "--n-max", "40", "--emit", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("3 4 37\n"));
    let o = run(&["verify", "--file", out.to_str().unwrap(), "--girth", "10"]);
    assert_eq!(o.status.code(), Some(0));

    let all = dir.path().join("all");
    let (code, v) = json(&["design", "--rows", "3", "--cols", "4", "--girth", "8", "--n-min", "9", "--n-max", "10", "--all", "--emit", all.to_str().unwrap()]);
    assert_eq!(code, 0);
    let n = v["result"]["found"].as_array().unwrap().len();
    assert!(n > 1);
    assert_eq!(std::fs::read_dir(&all).unwrap().count(), n);
}

#[test]
fn unwrap_reports_memory() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let emitted = dir.path().join("cc.txt");
    let (code, v) = json(&["unwrap", "--file", &path(dir.path(), "qc-m3-g10-n4.txt"), "--reduce-memory", "--emit", emitted.to_str().unwrap()]);
    assert_eq!(code, 0);
    let m = v["result"]["memory"].as_u64().unwrap();
    assert!(m <= v["result"]["unreduced_memory"].as_u64().unwrap());
    assert_eq!(v["result"]["constraint_length"].as_u64().unwrap(), (m + 1) * 4);
    let o = run(&["verify", "--file", emitted.to_str().unwrap(), "--girth", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn simulate_json_roundtrips_and_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let csv = dir.path().join("out.csv");
    let file = path(dir.path(), "qc-m3-g10-n4.txt");
    let args = ["simulate", "--file", &file, "--snr", "1:2:1", "--seed", "9", "--stop-errors", "10", "--out", csv.to_str().unwrap()];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    let r: SimResult = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), v["result"]);
    assert_eq!(r.to_csv(), std::fs::read_to_string(&csv).unwrap());
    assert_eq!(r.points.len(), 2);

    let o = run(&["simulate", "--file", &file, "--snr", "1:2:1", "--seed", "9", "--stop-errors", "10", "--threads", "3"]);
    assert_eq!(stdout(&o), r.to_csv());

    let cc = path(dir.path(), "cc-c3-g10-a4.txt");
    let (code, v) = json(&["simulate", "--file", &cc, "--sc", "--alpha", "2", "--iters", "10", "--chain-len", "60", "--snr", "4", "--stop-blocks", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["window"]["blocks"], 24);
    let (code, _) = json(&["simulate", "--file", &cc, "--snr", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn metrics_compare() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let (code, v) = json(&["metrics", &path(dir.path(), "qc-m3-g10-n4.txt"), &path(dir.path(), "qc-m3-g10-n5.txt"), "--iavg", "8", "--compare"]);
    assert_eq!(code, 0, "{v}");
    let theta = v["result"]["thetas"]["theta_n"].as_f64().unwrap();
    assert!((theta - 37.0 / 61.0).abs() < 1e-12);
    let bp: LatencyReport<f64> = serde_json::from_value(v["result"]["codes"][0]["bp"].clone()).unwrap();
    assert_eq!(bp.latency_bits, 148.0);
    assert_eq!(serde_json::to_value(bp).unwrap(), v["result"]["codes"][0]["bp"]);

    let (code, v) = json(&["metrics", &path(dir.path(), "cc-c3-g12-a8.txt"), "--alpha", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["codes"][0]["sw"]["latency_bits"], 11920.0);
    let (code, _) = json(&["metrics", &path(dir.path(), "cc-c3-g12-a8.txt")]);
    assert_eq!(code, 1);
}
