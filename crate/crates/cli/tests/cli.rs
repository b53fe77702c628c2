use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nusta(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nusta"));
    cmd.args(args).env_remove("NUSTA_OUTPUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("NUSTA_OUTPUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid json")
}

#[test]
fn spectrum_fit_sums_to_bound() {
    let out = nusta(&["spectrum", "--N", "3", "--sum-bound", "0.12"], None);
    assert!(out.status.success());
    let doc = json(&out.stdout);
    assert_eq!(doc["schema_version"], 1);
    let masses: Vec<f64> = doc["masses"].as_array().unwrap().iter().map(|m| m["mass_ev"].as_f64().unwrap()).collect();
    assert_eq!(masses.len(), 3);
    assert!((masses.iter().sum::<f64>() - 0.12).abs() < 1e-12);
    assert!(masses.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn spectrum_flags_are_exclusive_and_required() {
    assert_eq!(nusta(&["spectrum", "--sum-bound", "0.1", "--m-param", "1e-4"], None).status.code(), Some(2));
    assert_eq!(nusta(&["spectrum"], None).status.code(), Some(2));
    assert_eq!(nusta(&["spectrum", "--m-param", "-1"], None).status.code(), Some(2));
}

#[test]
fn spectrum_csv_and_env_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = nusta(&["spectrum", "--m-param", "1.97e-4", "--csv"], Some(dir.path()));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,mass_ev,mass_inverse_m"));
    assert_eq!(csv.lines().count(), 4);
    let doc = json(&std::fs::read(dir.path().join("spectrum.json")).unwrap());
    assert_eq!(doc["params"]["N"], 3.0);
}

#[test]
fn out_flag_beats_env() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    let out = nusta(&["spectrum", "--m-param", "1e-4", "--out", flag], Some(env_dir.path()));
    assert!(out.status.success());
    assert!(flag_dir.path().join("spectrum.json").exists());
    assert!(!env_dir.path().join("spectrum.json").exists());
}

#[test]
fn field_sample_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("field.json");
    std::fs::write(
        &cfg,
        r#"{"field": {"kind": "duality", "beltrami": {"lambda_eig": 1.0, "a": 1, "b": 0.5, "c": 0}, "m": 1.0, "v": 0.3},
            "grid": {"extents": [1, 1, 1, 1], "counts": [2, 2, 2, 3]}}"#,
    )
    .unwrap();
    let out = nusta(&["field", "sample", "--config", cfg.to_str().unwrap()], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("field_samples.csv")).unwrap();
    assert_eq!(csv.lines().count(), 25);
    let meta = json(&std::fs::read(dir.path().join("field_samples.json")).unwrap());
    assert_eq!(meta["rows"], 24);
    assert_eq!(meta["columns"].as_array().unwrap().len(), 20);
}

#[test]
fn field_sample_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("field.json");
    std::fs::write(&cfg, r#"{"field": {"kind": "nope"}, "grid": {"extents": [1,1,1,1], "counts": [1,1,1,1]}}"#).unwrap();
    let out = nusta(&["field", "sample", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn spinor_check_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spinor.json");
    std::fs::write(&cfg, r#"{"branch": "bradyonic", "m": 1.0, "k": 1.0, "points_per_axis": 2}"#).unwrap();
    let out = nusta(&["spinor", "check", "--config", cfg.to_str().unwrap(), "--branch", "tachyonic", "--m", "0.6"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out.stdout);
    assert_eq!(doc["config"]["branch"], "tachyonic");
    assert!((doc["omega"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    for r in doc["residuals"].as_array().unwrap() {
        assert!(r["max_abs"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn spinor_check_off_shell_is_an_error() {
    let out = nusta(&["spinor", "check", "--m", "1", "--k", "1", "--omega", "3"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = nusta(&["verify"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&std::fs::read(dir.path().join("verify_report.json")).unwrap());
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["summary"]["expected_inconsistent"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_impossible_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = nusta(&["verify", "--tol-abs", "1e-300", "--tol-rel", "1e-300"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"tolerance_abs": -1}"#).unwrap();
    assert_eq!(nusta(&["verify", "--config", cfg.to_str().unwrap()], None).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(nusta(&["verify", "--config", cfg.to_str().unwrap()], None).status.code(), Some(2));
}
