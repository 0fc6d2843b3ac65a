use std::path::Path;
use std::process::{Command, Output};

use monogen::record::OutputRecord;

fn monogen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogen"))
        .args(args)
        .env_remove("MONOGEN_EFFORT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<OutputRecord> {
    stdout(o)
        .lines()
        .map(|l| OutputRecord::from_line(l).unwrap_or_else(|e| panic!("{e}: {l}")))
        .collect()
}

#[test]
fn analyze_f5_text() {
    let o = monogen(&["analyze", "--n", "5", "--a", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("disc = -3810882568359375"), "{out}");
    assert!(out.contains("= -3^3 * 5^18 * 37"));
    assert!(out.contains("index: 3"));
    assert!(out.contains("monogenic: no"));
}

#[test]
fn analyze_json_matches_text() {
    let text = stdout(&monogen(&["analyze", "--n", "3", "--a", "2"]));
    let recs = records(&monogen(&["analyze", "--n", "3", "--a", "2", "--json", "--cross-check"]));
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert_eq!(r.schema_version, "1");
    assert_eq!(r.command, "analyze");
    let verdicts = r.result["verdicts"].as_array().unwrap();
    let primes: Vec<&str> = verdicts.iter().map(|v| v["prime"].as_str().unwrap()).collect();
    assert_eq!(primes, ["2", "3", "5"]);
    assert!(r.result["cross_check"]["mismatches"].as_array().unwrap().is_empty());
    let mono = r.result["monogenic"]["verdict"].as_str().unwrap();
    assert!(text.contains(&format!("monogenic: {mono}")), "{text}");
}

#[test]
fn analyze_usage_errors() {
    assert_eq!(monogen(&["analyze", "--n", "2", "--a", "0"]).status.code(), Some(2));
    assert_eq!(monogen(&["analyze", "--n", "1", "--a", "5"]).status.code(), Some(2));
    assert_eq!(monogen(&["analyze", "--n", "x", "--a", "5"]).status.code(), Some(2));
    assert_eq!(monogen(&["analyze", "--n", "3", "--a", "2", "--effort", "max"]).status.code(), Some(2));
}

#[test]
fn disc_verify_and_zero() {
    let o = monogen(&["disc", "--n", "2", "--a", "3", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("disc = 144"));
    assert!(stdout(&o).contains("verified: yes"));

    let o = monogen(&["disc", "--n", "2", "--a", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r.result["disc"], "0");
    assert!(r.diagnostics.iter().any(|d| d.contains("f has repeated factor")));
}

#[test]
fn classify_cases() {
    let o = monogen(&["classify", "--n", "5", "--a", "5", "--p", "3", "--cross-check", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r.result["divides_index"], true);
    assert_eq!(r.result["case_tag"], "odd_tail");
    assert_eq!(r.result["agree"], true);

    let o = monogen(&["classify", "--n", "5", "--a", "5", "--p", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("11 ∤ Δ ⇒ 11 ∤ ind"));

    assert_eq!(monogen(&["classify", "--n", "5", "--a", "5", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn factor_mod_output() {
    let o = monogen(&["factor-mod", "--n", "5", "--a", "5", "--p", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    let total: u64 = r.result["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["coeffs"].as_array().unwrap().len() as u64 - 1) * f["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 10);
    assert_eq!(monogen(&["factor-mod", "--n", "5", "--a", "5", "--p", "9"]).status.code(), Some(2));
}

#[test]
fn fp_table_small() {
    let o = monogen(&["fp-table", "--max", "50", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    let rows: Vec<_> = recs.iter().filter(|r| r.result.get("p").is_some()).collect();
    assert_eq!(rows.len(), 14);
    let row47 = rows.iter().find(|r| r.result["p"] == 47).unwrap();
    assert_eq!(row47.result["index"]["value"], "5");
    assert!(!row47.diagnostics.is_empty());
    let summary = recs.last().unwrap();
    assert_eq!(summary.result["squarefree_h"], serde_json::json!([3, 11, 13, 17, 19, 29, 37]));
    assert_eq!(monogen(&["fp-table", "--max", "2"]).status.code(), Some(2));
}

#[test]
fn effort_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_monogen"))
        .args(["analyze", "--n", "3", "--a", "3", "--json"])
        .env("MONOGEN_EFFORT", "quick")
        .output()
        .unwrap();
    assert_eq!(records(&o)[0].inputs["effort"], "quick");
}

fn scan(cache: &Path) -> Output {
    monogen(&["scan", "--n-range", "2:4", "--a-range", "-5:5", "--json", "--cache", cache.to_str().unwrap()])
}

#[test]
fn scan_resumes_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("scan.jsonl");

    let first = scan(&cache);
    assert_eq!(first.status.code(), Some(0));
    let recs = records(&first);
    assert_eq!(recs.len(), 33);
    assert!(stderr(&first).contains("33 records, 30 computed, 0 cache hits"), "{}", stderr(&first));
    let reducible = recs
        .iter()
        .find(|r| r.inputs["n"] == 2 && r.inputs["a"] == "1")
        .unwrap();
    assert_eq!(reducible.result["irreducibility"]["verdict"], "reducible");

    let second = scan(&cache);
    assert!(stderr(&second).contains("33 records, 0 computed, 33 cache hits"), "{}", stderr(&second));
    assert_eq!(records(&second), recs);

    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 33);
}

#[test]
fn scan_unwritable_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("missing-dir").join("scan.jsonl");
    assert_eq!(scan(&cache).status.code(), Some(4));
}
