use std::process::{Command, Output};

use serde_json::Value;

fn cs3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cs3")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = cs3(&all);
    let value = serde_json::from_slice(&out.stdout).expect("valid JSON on stdout");
    (value, out.status.code().unwrap())
}

#[test]
fn berger_lorentz_at_one() {
    let (v, code) = json(&["run", "berger-lorentz", "--lambda", "1"]);
    assert_eq!(code, 0);
    let algebraic = &v["reports"][0];
    assert_eq!(algebraic["exact"], "5");
    assert_eq!(algebraic["value"], 5.0);
    let contexts: Vec<&str> = algebraic["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["context"].as_str().unwrap())
        .collect();
    assert_eq!(contexts, ["lorentz_22", "lorentz_31"]);
    assert_eq!(algebraic["verdicts"][0]["obstructed"], true);
    assert_eq!(algebraic["verdicts"][1]["obstructed"], false);
    assert!((v["reports"][1]["value"].as_f64().unwrap() - 5.0).abs() <= 1e-6);
    assert!(v["route_difference"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn lambda_is_exact_and_decimals_warn() {
    let (v, code) = json(&["run", "berger-lorentz", "--lambda", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"][0]["exact"], "41/16");
    let out = cs3(&["run", "berger-lorentz", "--lambda", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["exact"], "41/16");
    let (v, _) = json(&["run", "berger-lorentz:2"]);
    assert_eq!(v["reports"][0]["exact"], "26");
}

#[test]
fn rp3_is_obstructed() {
    let out = cs3(&["run", "rp3-equiaffine"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("exact           1/2"));
    assert!(text.contains("no global equiaffine immersion"));
}

#[test]
fn normalization_pair() {
    let (v, code) = json(&["run", "so4-normalization"]);
    assert_eq!(code, 0);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["exact"], "1");
    assert!((reports[1]["value"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert_eq!(reports[1]["chart"]["orientation_sign"], -1);
}

#[test]
fn section_change() {
    let (v, code) = json(&["run", "section-change:identity"]);
    assert_eq!(code, 0);
    let delta = v["reports"][2]["value"].as_f64().unwrap();
    assert!((delta - 1.0).abs() <= 1e-4);
}

#[test]
fn dump_forms() {
    let (v, _) = json(&["run", "s3-round", "--dump-forms"]);
    let forms = v["forms"].as_array().unwrap();
    let text = |i: usize| forms[i]["text"].as_str().unwrap();
    assert_eq!(forms.len(), 3);
    assert!(text(0).starts_with("form degree 1 rank 3 space so3"));
    assert!(text(1).starts_with("form degree 3 rank 3 space scalar"));
    assert!(text(2).starts_with("polyform vars 4 degree 3"));
    let (v, _) = json(&["run", "s3-round"]);
    assert!(v.get("forms").is_none());
}

#[test]
fn levels_set_the_refinement_ladder() {
    let (v, _) = json(&["run", "s3-round", "--nodes", "24", "--levels", "2"]);
    let levels: Vec<u64> = v["reports"][1]["chart"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l[0].as_u64().unwrap())
        .collect();
    assert_eq!(levels, [12, 24]);
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cs3(&["run", "rp3-equiaffine", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_and_refused_names_exit_two() {
    for args in [
        &["run", "nope"][..],
        &["run", "burns-epstein"],
        &["run", "legendrian-contact"],
        &["suite", "nope"],
        &["run", "rp3-equiaffine", "--lambda", "2"],
        &["run", "berger-lorentz:2", "--lambda", "3"],
        &["run", "berger-lorentz", "--lambda", "abc"],
        &["run", "s3-round", "--nodes", "4", "--levels", "3"],
    ] {
        let out = cs3(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn resolution_bounds_are_enforced() {
    for args in [&["run", "s3-round", "--nodes", "3"][..], &["run", "s3-round", "--levels", "1"]] {
        assert_eq!(cs3(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unresolved_quadrature_exits_three() {
    let out = cs3(&["run", "s3-round", "--nodes", "4", "--levels", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn suites() {
    let (v, code) = json(&["suite", "normalization", "--nodes", "32"]);
    assert_eq!(code, 0);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(2), Some(0)));

    let (v, code) = json(&["suite", "identities", "--trials", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn suites_are_deterministic() {
    let a = cs3(&["suite", "identities", "--trials", "10", "--seed", "7", "--format", "json"]);
    let b = cs3(&["suite", "identities", "--trials", "10", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn composite_suite() {
    let out = cs3(&["suite", "all", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().lines().last().unwrap().starts_with("all: "));
    assert!(text.contains(" 0 failed"));
}
