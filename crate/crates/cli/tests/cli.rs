use std::process::{Command, Output};

use serde_json::Value;

fn ddo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddo"))
        .args(args)
        .env_remove("DDO_QUAD_ORDER")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn spectrum_row_matches_closed_form() {
    let out = ddo(&[
        "spectrum",
        "--omega",
        "1",
        "--beta",
        "0.01",
        "--beta-prime",
        "0.01",
        "--two-j-max",
        "3",
        "--n-max",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["two_j_max"], 3);
    let rows = v["result"]["entries"].as_array().unwrap();
    let row = rows
        .iter()
        .find(|r| r["s"] == "+" && r["two_j"] == 1 && r["n"] == 1 && r["sigma"] == 1)
        .unwrap();
    assert!((row["e2_minus_1"].as_f64().unwrap() - 4.12).abs() < 1e-12);
    assert!(!rows
        .iter()
        .any(|r| r["regime"] == "SmallJ" && r["sigma"] == -1 && r["n"] == 0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("4.120000000000e+00"));
}

#[test]
fn classify_very_large_j() {
    let out = ddo(&[
        "classify",
        "--omega",
        "1",
        "--beta",
        "0.01",
        "--beta-prime",
        "0",
        "--two-j",
        "201",
        "--s",
        "+",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["regime"], "VeryLargeJ");
    assert!(
        v["result"]["two_beta_omega_j"].as_f64().unwrap()
            > v["result"]["very_large_bound"].as_f64().unwrap()
    );
}

#[test]
fn classify_accepts_minus_spin() {
    let out = ddo(&["classify", "--two-j", "3", "--s", "-", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[0].starts_with("# config "));
    assert_eq!(
        lines[1],
        "s,two_j,regime,two_beta_omega_j,small_bound,very_large_bound"
    );
    assert!(lines[2].starts_with("-,3,SMinus,"));
}

#[test]
fn intermediate_channel_exits_2() {
    let out = ddo(&[
        "spectrum",
        "--beta",
        "0.01",
        "--beta-prime",
        "0",
        "--two-j",
        "199",
        "--s",
        "+",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no bound state"), "{err}");
    assert!(err.contains("1.990000000000e0"), "{err}");
    let out = ddo(&[
        "wavefunction",
        "--beta",
        "0.01",
        "--beta-prime",
        "0",
        "--two-j",
        "199",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_input_exits_1() {
    for args in [
        &["classify", "--two-j", "2"][..],
        &["spectrum", "--omega", "-1"],
        &["classify", "--two-j", "3", "--s", "x"],
        &["nonsense"],
        &["wavefunction", "--two-j", "1", "--sigma", "2"],
    ] {
        assert_eq!(ddo(args).status.code(), Some(1), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_ddo"))
        .args(["wavefunction", "--two-j", "1"])
        .env("DDO_QUAD_ORDER", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_all_passes() {
    let out = ddo(&["verify", "--all", "--tol", "1e-4"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["config"]["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn failed_verification_exits_3() {
    let out = ddo(&["oracle", "--two-j", "1", "--grid", "64", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["passed"], false);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "wavefunction",
        "--two-j",
        "5",
        "--s",
        "-",
        "--n",
        "2",
        "--sigma",
        "-1",
        "--points",
        "50",
    ];
    let a = ddo(&args);
    let b = ddo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!((v["result"]["normalization"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 50);
}

#[test]
fn quadrature_order_override_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_ddo"))
        .args(["wavefunction", "--two-j", "1", "--points", "4"])
        .env("DDO_QUAD_ORDER", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["quad_order"], 64);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("ddo-cli-test-{}.csv", std::process::id()));
    let out = ddo(&[
        "oracle",
        "--two-j",
        "1",
        "--s",
        "-",
        "--n-max",
        "1",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.lines().nth(1).unwrap() == "name,residual,tolerance,passed,detail");
    assert!(text.contains("broken supersymmetry"));
}
