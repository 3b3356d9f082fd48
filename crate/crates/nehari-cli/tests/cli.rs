use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nehari(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nehari"))
        .args(args)
        .env_remove("NEHARI_GRID")
        .output()
        .expect("binary runs")
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const ZBAR: &str = r#"{"rows":1,"cols":1,"coefficients":[{"power":-1,"entries":[[[1.0,0.0]]]}]}"#;

const EYE2_SHIFT: &str = r#"{"rows":2,"cols":2,"coefficients":[{"power":-1,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}]}"#;

#[test]
fn example_pipeline_reports_the_published_numbers() {
    let out = nehari(&["example", "nehari-takagi-2x2", "--grid", "512"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["kind"], "example");
    assert_eq!(doc["config"]["grid_size"], 512);
    let report = &doc["report"];
    assert_eq!(report["audit"]["ind"], 6);
    assert_eq!(report["rhs_J"], 6);
    assert_eq!(report["rhs_mu"], 5);
    assert_eq!(report["audit"]["winding_det"], -6);
}

#[test]
fn scalar_level_zero_solve_returns_the_zero_function() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_file(dir.path(), "zbar.json", ZBAR);
    let out = nehari(&["aak", phi.to_str().unwrap(), "--k", "0", "--grid", "256"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["kind"], "scalar-aak");
    assert_eq!(doc["report"]["ind"], 1);
    assert_eq!(doc["report"]["q"]["coefficients"].as_array().unwrap().len(), 0);
}

#[test]
fn mismatched_shapes_exit_with_the_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_file(dir.path(), "phi.json", EYE2_SHIFT);
    let q = write_file(dir.path(), "q.json", ZBAR);
    let out = nehari(&[
        "index-audit",
        "--phi",
        phi.to_str().unwrap(),
        "--q",
        q.to_str().unwrap(),
        "--k",
        "1",
        "--grid",
        "256",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("shape mismatch"));
}

#[test]
fn unknown_subcommands_and_examples_use_the_usage_code() {
    let out = nehari(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nehari(&["example", "no-such-example"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeded_suite_runs_are_byte_identical() {
    let args = ["scalar-suite", "--count", "3", "--seed", "11", "--max-degree", "3", "--grid", "256"];
    let first = nehari(&args);
    let second = nehari(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let other = nehari(&["scalar-suite", "--count", "3", "--seed", "12", "--max-degree", "3", "--grid", "256"]);
    assert!(other.status.success());
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn output_flag_writes_the_same_bytes_and_lands_in_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_file(dir.path(), "zbar.json", ZBAR);
    let dest = dir.path().join("report.json");
    let out = nehari(&[
        "analyze",
        phi.to_str().unwrap(),
        "--grid",
        "128",
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read(&dest).unwrap();
    assert_eq!(written, out.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&written).unwrap();
    assert_eq!(doc["config"]["output"], dest.to_str().unwrap());
}

#[test]
fn grid_resolution_prefers_flag_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_file(dir.path(), "zbar.json", ZBAR);
    let from_env = Command::new(env!("CARGO_BIN_EXE_nehari"))
        .args(["analyze", phi.to_str().unwrap()])
        .env("NEHARI_GRID", "128")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(doc["config"]["grid_size"], 128);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_nehari"))
        .args(["analyze", phi.to_str().unwrap(), "--grid", "256"])
        .env("NEHARI_GRID", "128")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&flag_wins.stdout).unwrap();
    assert_eq!(doc["config"]["grid_size"], 256);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_nehari"))
        .args(["analyze", phi.to_str().unwrap()])
        .env("NEHARI_GRID", "nope")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}
