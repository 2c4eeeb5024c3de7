use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn canal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canal")).args(args).output().expect("binary runs")
}

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(format!("{name}.json")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn eval_json(args: &[&str]) -> Value {
    let o = canal(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("JSON output")
}

#[test]
fn eval_torus_values() {
    let v = eval_json(&["eval", &spec("torus"), "--s", "0", "--t", "0", "--json"]);
    assert!((v["K"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["H"].as_f64().unwrap() + 0.625).abs() < 1e-12);
    assert!((v["K_II"].as_f64().unwrap() + 0.625).abs() < 1e-12);
    assert!((v["EG-F^2"].as_f64().unwrap() - 16.0 / 9.0).abs() < 1e-12);
}

#[test]
fn eval_cylinder_is_flat() {
    for t in ["0", "1.3", "-2.5"] {
        let v = eval_json(&["eval", "--surface", "cylinder", "--s", "0.7", "--t", t, "--json"]);
        assert_eq!(v["K"].as_f64(), Some(0.0));
        assert_eq!(v["K_II"].as_f64(), Some(0.0));
    }
}

#[test]
fn eval_sphere_family_reports_undefined() {
    let v = eval_json(&["eval", &spec("sphere-family"), "--s", "1", "--t", "0.5", "--json"]);
    assert!(v["K_II"].as_str().unwrap().starts_with("undef"));
    assert!(v["H"].as_str().unwrap().starts_with("undef"));
}

#[test]
fn eval_table_and_digits() {
    let o = canal(&["eval", "--surface", "torus", "--s", "0", "--t", "0", "--digits", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let k = text.lines().find(|l| l.starts_with("K ")).expect("K row");
    assert!(k.ends_with("2.500e-1"), "{k}");
}

#[test]
fn classify_verdicts() {
    let v = eval_json(&["classify", &spec("cone")]);
    assert_eq!(v["family"], "cone");
    assert_eq!(v["flat"], "holds");
    assert_eq!(v["ii_minimal"], "holds");
    let v = eval_json(&["classify", &spec("helix-tube")]);
    for key in ["flat", "minimal", "ii_flat", "ii_minimal"] {
        assert_eq!(v[key], "fails", "{key}");
    }
}

#[test]
fn mesh_writes_obj_and_csv_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.obj");
    let o = canal(&["mesh", &spec("torus"), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let obj = std::fs::read_to_string(&out).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 400);
    assert_eq!(csv.lines().count(), 401);
    assert!(csv.starts_with("s,t,x,y,z,K,H,K_II,H_II\n"));
}

#[test]
fn mesh_csv_format_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = canal(&["mesh", "--surface", "cone", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(out.exists());
    assert!(!dir.path().join("c.obj").exists());
}

#[test]
fn outputs_are_deterministic() {
    let a = canal(&["eval", &spec("variable-tube"), "--s", "2.2", "--t", "0.9", "--json"]);
    let b = canal(&["eval", &spec("variable-tube"), "--s", "2.2", "--t", "0.9", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = canal(&["classify", "--surface", "variable-tube"]);
    let b = canal(&["classify", "--surface", "variable-tube"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(canal(&["eval", "/nonexistent/spec.json", "--s", "0", "--t", "0"]).status.code(), Some(1));
    assert_eq!(canal(&["eval"]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"curve":{"type":"line"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1},"x":1}"#).unwrap();
    assert_eq!(canal(&["classify", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(canal(&["classify", "--surface", "torus", "--tol-profile", "bogus"]).status.code(), Some(3));

    // |r'| >= 1
    assert_eq!(canal(&["verify", &spec("steep-radius")]).status.code(), Some(4));
}

#[test]
fn out_of_domain_point_is_rejected() {
    let o = canal(&["eval", &spec("torus"), "--s", "50", "--t", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn tolerance_flags_reach_the_evaluation() {
    // with a huge K threshold, H_II is reported undefined
    let v = eval_json(&["eval", "--surface", "torus", "--s", "0", "--t", "0", "--tol-k", "10", "--json"]);
    assert!(v["H_II"].as_str().unwrap().starts_with("undef"));
    let o = Command::new(env!("CARGO_BIN_EXE_canal"))
        .args(["eval", "--surface", "torus", "--s", "0", "--t", "0", "--json"])
        .env("CANAL_TOL_PROFILE", "strict")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn verify_builtin_passes() {
    let o = canal(&["verify", "--builtin", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"].as_array().unwrap().len() > 100);
}
