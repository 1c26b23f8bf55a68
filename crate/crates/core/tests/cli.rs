use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use dillonlab::formats::read_truth_table;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dillonlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = run(&[&["--output", "json"], args].concat());
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_table(dir: &Path, name: &str, n: u32, m: u32, words: &[u32]) -> String {
    let body: Vec<String> = words.iter().map(|w| format!("{w:x}")).collect();
    let path = dir.join(name);
    std::fs::write(&path, format!("vbf n={n} m={m}\n{}\n", body.join("\n"))).unwrap();
    format!("tt:{}", path.display())
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(code(&["dcheck", "gold:n=7,i=1,restrict=t0"]), 1);
    assert_eq!(code(&["dcheck", "gold:n=9,i=1,restrict=t0"]), 0);
    assert_eq!(code(&["analyze", "gold:n=5,i=1"]), 0);
    assert_eq!(code(&["analyze", "gold:n=7,i=1,restrict=t0"]), 1);
}

#[test]
fn zero_table_is_not_d() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_table(dir.path(), "zero.tt", 3, 2, &[0; 8]);
    assert_eq!(code(&["dcheck", &spec]), 1);
    let r = json(&["dcheck", &spec, "--method", "bruteforce"]);
    assert_eq!(r["verdict"], "not-d-function");
    assert_eq!(r["covered"], 1);
    assert_eq!(r["missing_total"], 3);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(code(&["dcheck", "gold:n=,i=1"]), 2);
    assert_eq!(code(&["dcheck", "nosuch:n=3"]), 2);
    assert_eq!(code(&["reproduce", "nope"]), 2);
    assert_eq!(code(&["dcheck", "tt:/nonexistent/file.tt"]), 2);
    assert_eq!(code(&["ddt", "gold:n=3,i=1", "--a", "0"]), 2);
    assert_eq!(code(&["dcheck", "rand2:n=5,m=5,seed=1,d=0.5,restrict=t0"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let out = run(&["reproduce", "nope"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dcheck"));
}

#[test]
fn walsh_rows() {
    let zero = json(&["walsh", "gold:n=3,i=1", "--v", "0"]);
    let vals: Vec<i64> = zero["values"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(vals, [8, 0, 0, 0, 0, 0, 0, 0]);
    for v in 1..8 {
        let row = json(&["walsh", "gold:n=3,i=1", "--v", &format!("{v:x}")]);
        for w in row["values"].as_array().unwrap() {
            assert!([0, 4, -4].contains(&w.as_i64().unwrap()));
        }
    }
}

#[test]
fn ddt_row_sums_and_csv() {
    let row = json(&["ddt", "gold:n=5,i=1", "--a", "3"]);
    let counts: Vec<u64> = row["counts"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(counts.iter().sum::<u64>(), 32);
    assert!(counts.iter().all(|&c| c == 0 || c == 2));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("row.csv");
    assert_eq!(code(&["ddt", "gold:n=3,i=1", "--a", "1", "--out", csv.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,value"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn dreport_schema() {
    let r = json(&["--witnesses", "dcheck", "gold:n=5,i=1", "--method", "ddt"]);
    assert_eq!(r["schema"], "dreport/1");
    for key in [
        "n",
        "m",
        "method",
        "verdict",
        "covered",
        "missing_total",
        "missing",
        "witnesses",
        "modulus",
        "provenance",
        "threads",
        "elapsed_ms",
    ] {
        assert!(r.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(r["method"], "ddt");
    assert_eq!(r["witnesses"].as_object().unwrap().len(), 32);
}

#[test]
fn analysis_schema() {
    let r = json(&["analyze", "gold:n=5,i=1"]);
    assert_eq!(r["schema"], "analysis/1");
    assert_eq!(r["is_apn"], true);
    assert_eq!(r["delta"], 2);
    assert_eq!(r["degree"], 2);
    assert_eq!(r["verdict"], "d-function");
    let reports = r["d_reports"].as_array().unwrap();
    assert!(reports.len() >= 5);
    assert!(reports.iter().all(|d| d["verdict"] == "d-function"));
}

#[test]
fn json_is_reproducible_with_one_thread() {
    for args in [
        ["--threads", "1", "--output", "json", "--witnesses", "analyze", "gold:n=7,i=1,restrict=t0"],
        ["--threads", "1", "--output", "json", "--witnesses", "analyze", "rand2:n=6,m=8,seed=11"],
    ] {
        let strip = |o: Output| {
            let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
            v.as_object_mut().unwrap().remove("timings");
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(strip(run(&args)), strip(run(&args)));
    }
}

#[test]
fn restrict_writes_a_readable_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.tt");
    assert_eq!(code(&["restrict", "gold:n=7,i=1", "--out", out.to_str().unwrap()]), 0);
    let f = read_truth_table(&out).unwrap();
    assert_eq!((f.n(), f.m()), (6, 7));
    let spec = format!("tt:{}", out.display());
    assert_eq!(code(&["dcheck", &spec]), 1);
    let direct = json(&["dcheck", "gold:n=7,i=1,restrict=t0"]);
    let via_file = json(&["dcheck", &spec]);
    assert_eq!(direct["missing"], via_file["missing"]);
}

#[test]
fn moments_and_reproduce() {
    assert_eq!(code(&["moments", "gold:n=4,i=1"]), 0);
    let r = json(&["moments", "rand2:n=4,m=5,seed=3"]);
    assert!(r.to_string().contains("holds"));
    assert_eq!(code(&["reproduce", "dillon-baseline"]), 0);
    let out = run(&["reproduce", "remark-n7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}
