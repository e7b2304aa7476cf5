use std::process::{Command, Output};

use serde_json::Value;

fn miq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_miq"))
        .args(args)
        .env_remove("MIQ_DEFAULT_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn list_prints_all_statement_tags() {
    let out = miq(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for tag in [
        "ando",
        "diff_dominance",
        "withD",
        "fsll",
        "lemma_sum",
        "lemma_product",
        "lemma_poly",
        "main_theorem",
        "cor_product",
        "cor_pair",
        "cor_weighted_sum",
        "cor_exp",
        "convex_theorem",
        "trace_monotone",
        "trace_convex",
        "cx_search",
    ] {
        assert!(text.lines().any(|l| l.trim_start().starts_with(&format!("{tag} "))), "{tag}");
    }
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = miq(&[
        "verify",
        "--statements",
        "ando,fsll",
        "--dims",
        "2..6",
        "--trials",
        "100",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["config"]["master_seed"], 1);
    let summary = report["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 2);
    for s in summary {
        assert_eq!(s["violations"], 0);
        assert_eq!(s["trials"], s["passes"]);
    }
}

#[test]
fn csv_format() {
    let out = miq(&["verify", "--statements", "diff_dominance", "--dims", "2..3", "--trials", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_miq"))
            .args(["verify", "--statements", "ando", "--dims", "2", "--trials", "1", "--functions", "log1p"])
            .env("MIQ_DEFAULT_SEED", seed)
            .output()
            .unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["config"]["master_seed"].as_u64().unwrap()
    };
    assert_eq!(run("1234"), 1234);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(miq(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(miq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(miq(&["verify", "--statements", "nope"]).status.code(), Some(2));
    assert_eq!(miq(&["verify", "--dims", "0..3"]).status.code(), Some(2));
    assert_eq!(miq(&["search", "--norm", "frobenius"]).status.code(), Some(2));
}

#[test]
fn search_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = miq(&[
        "search",
        "--function",
        "min1",
        "--norm",
        "op",
        "--budget",
        "100000",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("counterexample found"), "{stderr}");
    let witness: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(witness["margin"].as_f64().unwrap() < -1e-3);

    let out = miq(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bit-exact: true"), "{text}");
    assert!(text.contains("lhs singular values"));
}

#[test]
fn tampered_witness_fails_to_parse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = miq(&["search", "--budget", "200", "--rounds", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap().replacen("\"n\": 2", "\"n\": 5", 1);
    std::fs::write(&path, text).unwrap();
    let out = miq(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("parse"));
}
