use std::process::{Command, Output};

use serde_json::Value;

fn sl3(args: &[&str], out: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3"))
        .args(args)
        .env("SL3_OUTPUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["selftest"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("selftest.json").exists());
}

#[test]
fn count_reports_the_listed_keys() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["count", "--l", "1", "--n", "1", "--at-identity", "--witnesses"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let data = &v["data"];
    assert_eq!(data["count"], 24);
    assert!(data["bound"].as_f64().unwrap() > 0.0);
    assert!(data["constant"].as_f64().is_some());
    assert_eq!(data["witnesses"].as_array().unwrap().len(), 24);
}

#[test]
fn reports_are_stable_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let mut v = json(&sl3(&["count", "--l", "1", "--n", "3", "--d1", "0.5", "--d2", "0.5", "--witnesses"], dir.path()));
        v.as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn compact_point_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["count", "--l", "1", "--n", "2", "--compact", "0.1,-0.2,0.3,0.9,0.95", "--d1", "0.5", "--d2", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = sl3(&["count", "--l", "1", "--n", "2", "--compact", "0.1,-0.2,0.3,0.2,0.95"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sl3(&["spherical", "--s", "x,1"], dir.path()).status.code(), Some(2));
    assert_eq!(sl3(&["hecke", "linearize", "--p", "1", "--q", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(sl3(&["count", "--l", "2", "--n", "3"], dir.path()).status.code(), Some(2));
    assert_eq!(sl3(&["kernel", "--T="], dir.path()).status.code(), Some(2));
}

#[test]
fn over_budget_names_the_offending_pair() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[count]\nmax_det = 10\n").unwrap();
    let o = sl3(&["--config", cfg.to_str().unwrap(), "count", "--l", "1", "--n", "27"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(1, 27)"));
}

#[test]
fn optimizer_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["supnorm", "--optimize"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["data"]["optimizer"]["x"], "1/15");
    assert_eq!(v["data"]["optimizer"]["exponent"], "44/15");
}

#[test]
fn hecke_report_lists_six_identities() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["hecke", "linearize", "--p", "2", "--q", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn trivial_parameter_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["spherical", "--s", "-1,-1", "--grid", "2"], dir.path());
    let v = json(&o);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"constant function"));
    assert_eq!(o.status.code(), Some(0), "{}", serde_json::to_string_pretty(&v["checks"]).unwrap());
}

#[test]
fn kernel_export_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = sl3(&["kernel", "--T", "10", "--export", "--table", "11"], dir.path());
    assert!(o.status.code() == Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("kernel_T10.csv")).unwrap();
    assert!(csv.starts_with("log_alpha1,log_alpha2,k\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 1 + 11 * 11);
}
