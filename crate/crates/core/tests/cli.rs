//! End-to-end runs of the binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulersech")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn euler_table() {
    let out = run(&["euler", "--n-max", "10"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10]["euler"], "-50521");
    assert_eq!(rows[10]["zigzag"], "50521");
    assert_eq!(rows[1]["euler_star"], "-1/2");

    let single = json(&run(&["euler", "--n-max", "0"]));
    assert_eq!(single["rows"].as_array().unwrap().len(), 1);

    let csv = String::from_utf8(run(&["euler", "--n-max", "2", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().collect::<Vec<_>>(), ["n,euler,euler_star,zigzag", "0,1,1,1", "1,0,-1/2,1", "2,-1,0,1"]);
}

#[test]
fn beta_suite_reports() {
    let out = run(&["verify", "beta", "--n-range", "0..3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["pass"], true);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["pass"] == true));
    assert_eq!(reports.iter().map(|r| r["n"].as_u64().unwrap()).collect::<Vec<_>>(), [0, 1, 2, 3]);
    assert!(reports[0].get("runtime_ms").is_none());
}

#[test]
fn zeta_even_first_row_is_basel() {
    let doc = json(&run(&["verify", "zeta-even", "--n-range", "0..0"]));
    let rhs = doc["reports"][0]["rhs"]["value"]["decimal"].as_str().unwrap();
    assert!(rhs.starts_with("1.644934066848226436472415166646025189"), "{rhs}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "gamma"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "beta", "--n-range", "4..2"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["euler", "--n-max", "201"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "beta", "--precision-bits", "53"]).status.code(), Some(2));
}

#[test]
fn failed_evaluation_exits_one() {
    // 64 bits cannot certify 1e-30.
    let out = run(&["verify", "beta", "--n-range", "0..1", "--precision-bits", "64"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn timings_are_opt_in() {
    let doc = json(&run(&["verify", "zeta-star", "--n-range", "0..2", "--timings"]));
    assert!(doc["reports"][0]["runtime_ms"].is_number());
}

#[test]
fn sample_is_byte_stable() {
    for fmt in ["csv", "json", "bin"] {
        let a = run(&["sample", "--samples", "5000", "--seed", "11", "--format", fmt]);
        let b = run(&["sample", "--samples", "5000", "--seed", "11", "--format", fmt]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{fmt}");
    }
    let other = run(&["sample", "--samples", "5000", "--seed", "12", "--format", "bin"]);
    assert_ne!(other.stdout, run(&["sample", "--samples", "5000", "--seed", "11", "--format", "bin"]).stdout);
    assert!(run(&["sample", "--samples", "0", "--format", "csv"]).stdout.is_empty());
    assert_eq!(run(&["sample", "--samples", "7", "--format", "bin"]).stdout.len(), 56);
}

#[test]
fn verify_is_byte_stable() {
    for suite in ["beta", "eq9", "moments"] {
        let a = run(&["verify", suite, "--n-range", "1..4", "--format", "csv"]);
        let b = run(&["verify", suite, "--n-range", "1..4", "--format", "csv"]);
        assert_eq!(a.status.code(), Some(0), "{suite}");
        assert_eq!(a.stdout, b.stdout, "{suite}");
    }
}

#[test]
fn small_clt_run() {
    let out = run(&["clt", "--folds", "1,4", "--batches", "100", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "fold_count,sample_count,ks_statistic,sup_density_gap");
    assert_eq!(lines.len(), 3);
    for l in &lines[1..] {
        let ks: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&ks));
    }
    assert_eq!(run(&["clt", "--batches", "99"]).status.code(), Some(2));
}
