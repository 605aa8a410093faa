use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cubeforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubeforms"))
        .args(args)
        .env_remove("CUBEFORMS_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

const EXAMPLE1: &str = r#"{"format_version":1,"p":3,"S":[0,1],"conditions":[
  {"form":[[0,1],[1,1]],"E":[0]},
  {"form":[[0,1],[2,1]],"E":[0]},
  {"form":[[0,1]],"E":[0]}]}"#;

#[test]
fn lse_reports_escape_length_and_witness() {
    let out = cubeforms(&["lse", "-p", "5", "-S", "0,1", "-E", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "L=3 witness=1,1 bound=3");

    let out = cubeforms(&["lse", "-p", "3", "-S", "0,1", "-E", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("L=0"), "{}", stdout(&out));
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["lse", "-p", "4", "-S", "0,1", "-E", "0"],
        vec!["lse", "-p", "3", "-S", "0", "-E", "0"],
        vec!["lse", "-p", "3", "-S", "0,1", "-E", "0,1,2"],
        vec!["frobnicate"],
    ] {
        let out = cubeforms(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn malformed_documents_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write(dir.path(), "bad.json", "{");
    let out = cubeforms(&["density", &truncated]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));

    let zero_coeff = write(
        dir.path(),
        "zero.json",
        r#"{"format_version":1,"p":3,"S":[0,1],"conditions":[{"form":[[0,0]],"E":[0]}]}"#,
    );
    assert_eq!(cubeforms(&["density", &zero_coeff]).status.code(), Some(2));

    let version = write(dir.path(), "v2.json", &EXAMPLE1.replace("\"format_version\":1", "\"format_version\":2"));
    assert_eq!(cubeforms(&["density", &version]).status.code(), Some(2));
}

#[test]
fn exact_density_of_example_system() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(dir.path(), "s.json", EXAMPLE1);
    let out = cubeforms(&["density", &system]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1/8 = 0.125");
}

#[test]
fn budget_flag_and_environment_trigger_resource_exit() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(dir.path(), "s.json", EXAMPLE1);
    let out = cubeforms(&["density", &system, "--budget", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--mode mc"));

    let out = Command::new(env!("CARGO_BIN_EXE_cubeforms"))
        .args(["density", &system])
        .env("CUBEFORMS_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn monte_carlo_is_reproducible_and_calibrated() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(dir.path(), "s.json", EXAMPLE1);
    let args = ["density", &system, "--mode", "mc", "--samples", "40000", "--seed", "11"];
    let first = cubeforms(&args);
    let second = cubeforms(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    assert!(text.contains("seed=11") && text.contains("samples=40000"), "{text}");
    let estimate: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((estimate - 0.125).abs() < 0.02, "{estimate}");
}

#[test]
fn bound_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(dir.path(), "s.json", EXAMPLE1);
    let cert = dir.path().join("c.json");
    let out = cubeforms(&["bound", &system, "-u", "2", "-r", "1", "-o", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("bound >= exact: yes"));

    let doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["kind"], "equidistribution");

    let out = cubeforms(&["verify", &system, cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "valid");
}

#[test]
fn tampered_certificates_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let system = write(dir.path(), "s.json", EXAMPLE1);
    let cert = dir.path().join("c.json");
    cubeforms(&["bound", &system, "-u", "2", "-r", "1", "-o", cert.to_str().unwrap()]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    doc["bound_exact"] = Value::String("1/2".into());
    let tampered = write(dir.path(), "t.json", &doc.to_string());
    let out = cubeforms(&["verify", &system, &tampered]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("bound mismatch"), "{}", stdout(&out));

    let fixture: Value =
        serde_json::from_str(&fs::read_to_string(fixtures_dir().join("verify_perturbed_petal.json")).unwrap()).unwrap();
    let system = write(dir.path(), "sf.json", &fixture["check"]["system"].to_string());
    let cert = write(dir.path(), "cf.json", &fixture["check"]["certificate"].to_string());
    let out = cubeforms(&["verify", &system, &cert]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("petal identity"), "{}", stdout(&out));
}

#[test]
fn generators_write_system_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("e4.json");
    let out = cubeforms(&["gen", "example4", "-p", "3", "-r", "2", "-k", "64", "--seed", "7", "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let system: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(system["conditions"].as_array().unwrap().len(), 64);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("e4.report.json")).unwrap()).unwrap();
    assert_eq!(report["format_version"], 1);
    assert_eq!(report["parameters"]["T"], "17");

    let again = dir.path().join("again.json");
    cubeforms(&["gen", "example4", "-p", "3", "-r", "2", "-k", "64", "--seed", "7", "-o", again.to_str().unwrap()]);
    assert_eq!(fs::read(&out_path).unwrap(), fs::read(&again).unwrap());

    let tight = dir.path().join("t.json");
    let out = cubeforms(&["gen", "tightness", "-p", "5", "-S", "0,1", "-E", "0,1,2", "-k", "4", "-o", tight.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = cubeforms(&["density", tight.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("1/1"), "{}", stdout(&out));

    let out = cubeforms(&["gen", "nope", "-o", dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_passes_on_shipped_fixtures() {
    let out = cubeforms(&["suite", fixtures_dir().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));

    let out = cubeforms(&["suite", fixtures_dir().to_str().unwrap(), "--json"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["failed"], 0);
    assert!(doc["passed"].as_u64().unwrap() >= 16);
}

#[test]
fn suite_names_the_failing_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["density_example1.json", "lse_interval.json"] {
        fs::copy(fixtures_dir().join(name), dir.path().join(name)).unwrap();
    }
    let path = dir.path().join("density_example1.json");
    let corrupted = fs::read_to_string(&path).unwrap().replace("1/8", "1/9");
    fs::write(&path, corrupted).unwrap();
    let out = cubeforms(&["suite", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("density_example1")), "{text}");
    assert!(text.contains("1 passed, 1 failed"), "{text}");
}
