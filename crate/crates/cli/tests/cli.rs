use std::process::Command;

use schreier_cli::{run, EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["schreier-lab".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("schreier-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn member_prints_verdict() {
    let (code, out, _) = invoke(&["schreier", "member", "--alpha", "1", "--set", "2,3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "true");
    let (code, out, _) = invoke(&["schreier", "member", "--alpha", "1", "--set", "2,3,4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "false");
}

#[test]
fn small_verify_passes() {
    let (code, out, _) = invoke(&["verify", "P31", "--alpha", "w", "--samples", "10", "--seed", "1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("P31: PASS"));
}

#[test]
fn tightened_bound_reports_violation() {
    let (code, out, _) = invoke(&["verify", "P31", "--alpha", "1", "--samples", "200", "--bound", "1"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(out.contains("P31: FAIL"));
}

#[test]
fn malformed_vector_is_usage_error() {
    let path = scratch("bad.json", "[[1,2");
    let (code, _, err) = invoke(&["norm", "--space", "schreier(1)", "--vector", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn unknown_command_is_usage_error() {
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "NOPE"]).0, EXIT_USAGE);
}

#[test]
fn window_past_capacity_exits_three() {
    let (code, _, err) = invoke(&["schreier", "enum", "--alpha", "1", "--window", "40"]);
    assert_eq!(code, EXIT_CAPACITY, "{err}");
}

#[test]
fn norm_of_coordinates() {
    let (code, out, _) = invoke(&["norm", "--space", "schreier(1)", "--coords", "2:1,3:1,4:1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("2"), "{out}");
}

#[test]
fn csv_has_one_row_per_suite() {
    let (code, out, _) = invoke(&["verify", "R212", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "suite,pass,samples,violations,bound,max_ratio");
    assert!(rows[1].starts_with("R212,true,"));
    assert_eq!(rows.len(), 2);
}

#[test]
fn json_header_records_run() {
    let (code, out, _) = invoke(&["--seed", "7", "--format", "json", "schreier", "member", "--alpha", "w", "--set", "3,4,5"]);
    assert_eq!(code, EXIT_OK);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let header = &doc["header"];
    assert_eq!(header["tool"], "schreier-lab");
    assert_eq!(header["seed"], 7);
    assert_eq!(header["capacity_env"]["variable"], "SCHREIER_CAPACITY");
    assert!(header["fundamental_sequences"].as_str().unwrap().starts_with("wainer"));
    assert!(header["capacity"]["schreier_window"].is_u64());
}

#[test]
fn json_is_reproducible_per_seed() {
    let args = ["--format", "json", "verify", "L66", "--alpha", "1", "--samples", "20", "--seed", "3"];
    assert_eq!(invoke(&args).1, invoke(&args).1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_schreier-lab");
    let ok = Command::new(bin).args(["schreier", "member", "--alpha", "2", "--set", "2,3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "true");
    let bad = Command::new(bin).arg("--nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
