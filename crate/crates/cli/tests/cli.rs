use std::process::{Command, Output};

use serde_json::Value;

fn helixlab(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_helixlab"));
    cmd.args(args).env_remove("HELIXLAB_SEED");
    if let Some(s) = env_seed {
        cmd.env("HELIXLAB_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn record<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no record {name}"))
}

#[test]
fn sol_reports_ricci_and_exits_zero() {
    let out = helixlab(&["sol", "--json"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["command"], "sol");
    let zz = record(&r, "ricci_zz");
    assert_eq!(zz["rhs"].as_f64(), Some(-2.0));
    assert!(zz["pass"].as_bool().unwrap());
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn analyze_tilted_plane() {
    let out = helixlab(&["analyze", "--chart", "tilted_plane:theta=0.4", "--json"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["observations"]["is_helix"], true);
    assert_eq!(r["observations"]["is_minimal"], true);
    assert_eq!(r["observations"]["affine_rank"], 2);
}

#[test]
fn lemma_la_default_run() {
    let out = helixlab(&["lemma-la", "--k", "4", "--trials", "200", "--json"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(record(&r, "false_positives")["lhs"].as_f64(), Some(0.0));
    assert_eq!(r["config"]["k"], 4);
}

#[test]
fn out_file_matches_stdout_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.json");
    let out = helixlab(&["sol", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "sol");
    assert!(written["summary"]["pass"].as_bool().unwrap());
}

#[test]
fn env_seed_overrides_flag() {
    let out = helixlab(&["offsets", "--trials", "3", "--seed", "5", "--json"], Some("99"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["seed"], 99);
    let bad = helixlab(&["sol"], Some("not-a-number"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn same_seed_same_report() {
    let a = json(&helixlab(&["offsets", "--trials", "4", "--seed", "3", "--json"], None));
    let b = json(&helixlab(&["offsets", "--trials", "4", "--seed", "3", "--json"], None));
    assert_eq!(a["records"], b["records"]);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["lemma-la", "--k", "0"][..],
        &["sol", "--tol", "-1"],
        &["offsets", "--t-grid", "0:1"],
        &["analyze", "--chart", "no_such_chart"],
        &["analyze", "--chart", "flat"],
        &["analyze", "--chart", "cone:k=1", "--direction", "1,0"],
        &["project", "--function", "wobbly"],
    ] {
        let out = helixlab(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failing_checks_exit_one_and_still_write_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.json");
    let out = helixlab(
        &["analyze", "--chart", "round_sphere", "--tol", "1e-300", "--out", path.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["summary"]["pass"], false);
    assert_eq!(written["observations"]["is_helix"], false);
}
