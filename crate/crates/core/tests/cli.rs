use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.quiv"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiver-findim"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn basis_and_normal_form() {
    let (code, v) = json(&["basis", &path("exam2")]);
    assert_eq!(code, 0);
    assert!(v["dimension"].as_u64().unwrap() > 0);
    let out = run(&["nf", &path("exam2"), "--elem", "gamma2*delta2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "gamma1*delta1");
}

#[test]
fn projective_dimension() {
    let (code, v) = json(&["pd", &path("magicexam"), "--module", "S2"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("\"exact\":4"), "{v}");
}

#[test]
fn bound_exit_codes() {
    let ok = run(&["bound", &path("exam2"), "--arrow", "alpha"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("1 <= fpd <= 9"));
    let (code, v) = json(&["bound", &path("exam4"), "--arrow", "alpha"]);
    assert_eq!(code, 4);
    assert!(v["fpd_upper"].is_null());
}

#[test]
fn remove_writes_a_loadable_presentation() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("exam2_gamma.quiv");
    let status = run(&[
        "remove",
        &path("exam2"),
        "--arrow",
        "alpha",
        "-o",
        &out.display().to_string(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let (code, v) = json(&["admissible", &out.display().to_string()]);
    assert_eq!(code, 0, "{v}");
    let gamma = quiver_findim::format::parse_file(&out).unwrap().algebra().unwrap();
    assert!(gamma.quiver().arrow("alpha").is_none());
}

#[test]
fn errors_are_reported_with_exit_codes() {
    let missing = run(&["--json", "basis", "/nonexistent/file.quiv"]);
    assert_eq!(missing.status.code(), Some(1));
    let broken = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("broken.quiv");
    std::fs::write(&broken, "field Q\nquiver\n  vertex 1\n  arrow x 1 9\nend\n").unwrap();
    let (code, v) = json(&["basis", &broken.display().to_string()]);
    assert_eq!(code, 2);
    assert!(v["error"]["kind"].is_string());
    let (code, _) = json(&["pd", &path("exam2"), "--module", "S42"]);
    assert_eq!(code, 1);
}

#[test]
fn selftest_runs() {
    let (code, v) = json(&["selftest", "--samples", "3"]);
    assert_eq!(code, 0, "{v}");
}
