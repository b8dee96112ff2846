use std::process::{Command, Output};

use serde_json::Value;

fn qgrav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrav"))
        .args(args)
        .env_remove("QGRAV_TOL")
        .output()
        .expect("qgrav binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qgrav(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn state_near_one_third_has_vanishing_minimum() {
    let v = json(&["state", "--omega", "0.3333333333"]);
    let min = v["tripartite"]["min_eigenvalue"].as_f64().unwrap();
    assert!((min - (3.0 * 0.3333333333 - 1.0) / 4.0).abs() < 1e-12);
    assert_eq!(v["marginal"]["slots"], serde_json::json!(["GE", "E1"]));
}

#[test]
fn state_at_one_is_diagonal() {
    let v = json(&["state", "--omega", "1"]);
    let re = &v["marginal"]["matrix"]["re"];
    assert_eq!(re[0][3].as_f64(), Some(0.0));
    assert_eq!(re[0][0].as_f64(), Some(0.5));
}

#[test]
fn ppt_reports_asserted_and_computed_verdicts() {
    let v = json(&["ppt", "--omega", "0.5"]);
    let ge = &v["tripartite_cuts"][0];
    assert_eq!(ge["cut"], "GE");
    assert_eq!(ge["verdict"], "NPT");
    assert!((ge["min_eigenvalue"].as_f64().unwrap() + 0.125).abs() < 1e-12);
    assert!(v["discrepancies"].is_array());
}

#[test]
fn game_report_fields() {
    let v = json(&["game", "--pairs", "5"]);
    let value = v["game_value"].as_f64().unwrap();
    assert!((value - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
    assert!((v["trace"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!(v["normalization_max_error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn channel_at_right_angles_is_reset() {
    let half_pi = std::f64::consts::FRAC_PI_2.to_string();
    let v = json(&["channel", "--u", &half_pi, "--v", &half_pi]);
    assert_eq!(v["anti_degradable"], true);
    assert_eq!(v["identities_ok"], true);
    assert!((v["t3"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn negative_angles_are_accepted() {
    let v = json(&["channel", "--u", "-0.4", "--v", "1.0"]);
    assert_eq!(v["identities_ok"], true);
}

#[test]
fn latch_outputs() {
    let fixed = json(&["latch", "--control", "1", "--inputs", "00"]);
    assert_eq!(fixed["table_row"]["q_bar"], 1);
    assert!(fixed.get("joint_state").is_none());

    let plus = json(&["latch", "--control", "plus", "--inputs", "00"]);
    assert!((plus["fidelity_bell"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((plus["negativity"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!(plus["table_row"].is_null());
}

#[test]
fn sweep_csv_shape() {
    let out = qgrav(&["sweep", "--steps", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.01,"));
    assert!(lines[3].starts_with("0.333333333333,"));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn tolerance_from_environment_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_qgrav"))
        .args(["ppt", "--omega", "0.5"])
        .env("QGRAV_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_qgrav"))
        .args(["ppt", "--omega", "0.5"])
        .env("QGRAV_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}
