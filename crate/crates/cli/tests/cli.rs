use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vedkit(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vedkit")).arg("--cache").arg(cache).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn record(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("one JSON record")
}

#[test]
fn ved_plain_prints_one_integer() {
    let dir = tempfile::tempdir().unwrap();
    let out = vedkit(&dir.path().join("c.jsonl"), &["ved", "--n", "4", "--output", "plain"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "122");
}

#[test]
fn ved_verify_reports_verified() {
    let dir = tempfile::tempdir().unwrap();
    let out = vedkit(&dir.path().join("c.jsonl"), &["ved", "--n", "3", "--verify"]);
    assert!(out.status.success());
    let rec = record(&out);
    assert_eq!(rec["results"]["ved"], 13);
    assert_eq!(rec["results"]["verified"], true);
    assert_eq!(rec["convention_flags"]["sigma"], -1);
    assert_eq!(rec["convention_flags"]["xi_sign"], -1);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for args in [
        &["ved", "--n", "2"][..],
        &["ved-table", "--n-min", "5", "--n-max", "4"],
        &["ved-table", "--n-min", "3", "--n-max", "6", "--fit-window", "3:6", "--holdout", "2"],
        &["ed-count", "--metric", "nonsense"],
        &["ed-count", "--metric", "diag:1,1,1"],
        &["--output", "xml", "ved", "--n", "3"],
        &["frobnicate"],
    ] {
        let out = vedkit(&cache, args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn table_csv_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = vedkit(&dir.path().join("c.jsonl"), &["ved-table", "--n-min", "3", "--n-max", "6", "--output", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["n,ved", "3,13", "4,122", "5,1042", "6,8683"]);
}

#[test]
fn cache_hit_returns_the_same_payload() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = ["ved-table", "--n-min", "3", "--n-max", "9", "--fit-window", "3:7", "--holdout", "2"];
    let first = record(&vedkit(&cache, &args));
    let second = record(&vedkit(&cache, &args));
    assert_eq!(first["cache_hit"], false);
    assert_eq!(second["cache_hit"], true);
    for field in ["command", "parameters", "results", "seeds", "convention_flags"] {
        assert_eq!(first[field], second[field], "{field}");
    }
    // the table run also cached every row as a `ved` record
    let ved = record(&vedkit(&cache, &["ved", "--n", "5"]));
    assert_eq!(ved["cache_hit"], true);
    assert_eq!(ved["results"]["ved"], 1042);

    // forced recomputation agrees with the cached payload
    let fresh = record(&vedkit(&dir.path().join("other.jsonl"), &args));
    assert_eq!(fresh["results"], second["results"]);
}

#[test]
fn fit_on_exponential_sequence_is_not_stabilized() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["ved-table", "--n-min", "3", "--n-max", "12", "--fit-window", "4:8", "--holdout", "4"];
    let rec = record(&vedkit(&dir.path().join("c.jsonl"), &args));
    assert_eq!(rec["results"]["fit_status"], "not stabilized");
    assert_eq!(rec["results"]["fit"]["stable"], false);
}

#[test]
fn no_cache_flag_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = vedkit(&cache, &["--no-cache", "ved", "--n", "3"]);
    assert!(out.status.success());
    assert!(!cache.exists());
}

#[test]
fn compare_reports_equality_and_strict_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let out = vedkit(&dir.path().join("c.jsonl"), &["--seed", "5", "compare", "--seeds", "1"]);
    assert!(out.status.success());
    let rec = record(&out);
    let r = &rec["results"];
    assert_eq!(r["symbolic_ved"], 13);
    assert_eq!(r["generic"]["modal_count"], 13);
    assert_eq!(r["generic"]["equal"], true);
    assert_eq!(r["generic"]["verdicts"][0], "agrees");
    assert_eq!(r["bombieri_weyl"]["modal_count"], 3);
    assert_eq!(r["bombieri_weyl"]["strict"], true);
}

#[test]
fn ed_count_with_metric_file() {
    let dir = tempfile::tempdir().unwrap();
    let metric = dir.path().join("metric.json");
    // Bombieri-Weyl weights written out as an explicit Gram matrix
    let mut gram = [[0.0f64; 6]; 6];
    for (k, w) in [1.0, 2.0, 2.0, 1.0, 2.0, 1.0].into_iter().enumerate() {
        gram[k][k] = w;
    }
    std::fs::write(&metric, serde_json::json!({ "gram": gram }).to_string()).unwrap();
    let spec = format!("file:{}", metric.display());
    let out =
        vedkit(&dir.path().join("c.jsonl"), &["ed-count", "--metric", &spec, "--trials", "1", "--output", "plain"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3");
}
