use std::path::Path;
use std::process::{Command, Output};

fn magpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magpol")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn oned_reports_closed_form() {
    let o = magpol(&["oned", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value(&stdout(&o), "numeric_energy") + 1.0 / 12.0).abs() < 1e-6);

    let o = magpol(&["oned", "--a", "2", "--b", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value(&stdout(&o), "numeric_energy") + 6.0).abs() < 1e-6);

    let o = magpol(&["oned", "--a", "1", "--b", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(value(&text, "numeric_energy"), 0.0);
    assert!(text.contains("degenerate = true"));
}

#[test]
fn validation_errors_exit_with_one() {
    assert_eq!(magpol(&["oned", "--a", "-1"]).status.code(), Some(1));
    assert_eq!(magpol(&["minimize"]).status.code(), Some(1));
    assert_eq!(magpol(&["minimize", "--B", "ex"]).status.code(), Some(1));
    assert_eq!(magpol(&["bogus"]).status.code(), Some(1));
    assert_eq!(magpol(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let o = magpol(&["sweep", "--alpha", "1", "--B", "e14,e10,e12,e16", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "B,alpha,E_total,E_kin3,E_coulomb,trial_E,cert_bound,iters,residual");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let mut prev = 0.0;
    for r in &rows {
        let f = |i: usize| r[i].parse::<f64>().unwrap();
        assert!(f(0) > prev);
        prev = f(0);
        assert!(f(2) < f(0));
        assert!((f(2) - (f(0) + f(3) + f(4))).abs() <= 1e-10 * f(0));
        assert!(f(2) <= f(5));
        assert!(r[6].is_empty());
        assert!(r[2].contains('e') && r[2].split('e').next().unwrap().len() == 18);
    }
    let o = magpol(&["fit", "--in", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(value(&text, "c2") > 0.0);
    value(&text, "c3");
    value(&text, "c4");
    value(&text, "residual_rms");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# oned settings\na = 2\nb = 3\n").unwrap();
    let o = magpol(&["--config", cfg.to_str().unwrap(), "oned"]);
    assert!((value(&stdout(&o), "numeric_energy") + 6.0).abs() < 1e-6);
    let o = magpol(&["oned", "--config", cfg.to_str().unwrap(), "--a", "1"]);
    assert!((value(&stdout(&o), "numeric_energy") + 9.0 / 12.0).abs() < 1e-6);
    std::fs::write(&cfg, "a = 1\nb = oops\n").unwrap();
    assert_eq!(magpol(&["--config", cfg.to_str().unwrap(), "oned"]).status.code(), Some(1));
}

fn certificate(args: &[&str], out: &Path) -> (Option<i32>, serde_json::Value) {
    let mut all = vec!["certify"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = magpol(&all);
    (o.status.code(), serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap())
}

#[test]
fn certify_writes_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let (code, json) = certificate(&["--B", "1e8", "--alpha", "1", "--C_M", "1"], &out);
    assert_eq!(code, Some(0));
    assert_eq!(json["validity"]["valid"], true);
    assert!(json["p0_bound"].as_f64().unwrap() < 1e8);
    for key in [
        "kappa",
        "kappa1",
        "kappa2",
        "R",
        "localization_error",
        "block_error",
        "mode_count_error",
        "projection_constant",
        "firstcut_constant",
    ] {
        assert!(json["ledger"][key].is_number(), "{key}");
    }
    assert!(json["assumptions"].as_array().unwrap().len() >= 2);
    assert!(json["conditional_full_bound"].as_f64().unwrap() < json["p0_bound"].as_f64().unwrap());

    let (code, json) = certificate(&["--B", "1e8", "--gamma", "1.5"], &out);
    assert_eq!(code, Some(1));
    assert_eq!(json["validity"]["valid"], false);
    assert!(json["ledger"]["R"].is_number());
}

#[test]
fn decompose_and_verify() {
    let o = magpol(&["decompose", "--B", "e8"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["r1_within_bound"], true);

    let o = magpol(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 10 && !text.contains("FAIL"));
}

#[test]
fn minimize_and_trial() {
    let o = magpol(&["minimize", "--B", "e10", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let m: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let o = magpol(&["trial", "--B", "e10"]);
    let t: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(m["minimum"]["total"].as_f64().unwrap() <= t["total"].as_f64().unwrap());
    assert!((t["transverse"].as_f64().unwrap() - 10f64.exp()).abs() < 1e-9);
}
