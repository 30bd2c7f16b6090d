use std::path::PathBuf;
use std::process::{Command, Output};

use moddiag::model::curve;
use moddiag::reports::{load_model_file, SuiteReport};
use moddiag::Error;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn moddiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moddiag")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn curve_file_equals_builtin() {
    assert_eq!(load_model_file(data("curve1.json")).unwrap(), curve(1).unwrap());
    let out = moddiag(&["model", "validate", data("curve1.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn off_top_trace_is_a_validation_failure() {
    assert!(matches!(load_model_file(data("trace_off_top.json")), Err(Error::InvalidModel(_))));
    let out = moddiag(&["model", "validate", data("trace_off_top.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the top degree"));
}

#[test]
fn involution_not_preserving_products_is_reported() {
    let out = moddiag(&["model", "validate", data("bad_involution.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("involution"));
}

#[test]
fn malformed_files_and_usage_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"name\": ").unwrap();
    assert_eq!(code(&moddiag(&["model", "validate", broken.to_str().unwrap()])), 2);
    assert_eq!(code(&moddiag(&["verify", "--suite", "no-such-suite"])), 2);
    assert_eq!(code(&moddiag(&["verify", "--suite", "stirling", "--param", "bogus=1"])), 2);
    assert_eq!(code(&moddiag(&["frobnicate"])), 2);
    assert_eq!(code(&moddiag(&["threshold", "--model", "curve:g=x", "--max-n", "4"])), 2);
}

#[test]
fn builtin_list_and_show() {
    let out = moddiag(&["model", "builtin", "--list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for kind in ["curve:g=", "abelian:g=", "k3:rho=", "product:", "cover:g=", "file:"] {
        assert!(text.contains(kind), "{kind}");
    }
    let out = moddiag(&["model", "builtin", "--show", "cover:g=2,h=1"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["involution"].as_array().unwrap().len(), 6);
}

#[test]
fn compute_gamma_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("gamma.json");
    let out = moddiag(&[
        "compute", "gamma", "--model", "curve:g=2", "--n", "2", "--route", "both", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = read_json(&out_path);
    assert_eq!(v["routesAgree"], Value::Bool(true));
    assert_eq!(v["isZero"], Value::Bool(false));
    assert_eq!(v["result"], v["expansionResult"]);

    // γ³ of a degree-one class on an elliptic curve vanishes
    let out = moddiag(&[
        "compute", "gamma", "--model", "curve:g=1", "--n", "3", "--alpha", data("alpha_a1.json").to_str().unwrap(),
        "--route", "both", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = read_json(&out_path);
    assert_eq!(v["isZero"], Value::Bool(true));
    assert_eq!(v["input"], serde_json::json!([[["a1"], "1/1"]]));
}

#[test]
fn compute_gamma_on_a_file_model() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("gamma.json");
    let spec = format!("file:{}", data("curve1.json").display());
    let out = moddiag(&["compute", "gamma", "--model", &spec, "--n", "3", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&out_path)["isZero"], Value::Bool(true));
}

#[test]
fn threshold_command() {
    let out = moddiag(&["threshold", "--model", "cover:g=2,h=1", "--max-n", "4"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["threshold"], 3);
    assert_eq!(v["matchesDegreeCriterion"], Value::Bool(true));
}

#[test]
fn verify_writes_report_and_diff_compares() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = moddiag(&["verify", "--suite", "thresholds", "--param", "maxN=5", "--out", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = SuiteReport::from_json(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert!(report.passed() && report.checksum_valid());
    assert_eq!(report.payload.parameters["maxN"], "5");

    let out = moddiag(&["verify", "--suite", "thresholds", "--param", "maxN=4", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = moddiag(&["report", "diff", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = moddiag(&["report", "diff", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("parameters differ"));
    assert!(text.contains("threshold/abelian:g=2: pass -> skipped"), "{text}");
}

#[test]
fn tampered_report_fails_the_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    assert_eq!(code(&moddiag(&["verify", "--suite", "formal", "--out", a.to_str().unwrap()])), 0);
    let mut v = read_json(&a);
    v["payload"]["checks"][0]["status"] = Value::String("fail".into());
    let b = dir.path().join("b.json");
    std::fs::write(&b, serde_json::to_string(&v).unwrap()).unwrap();
    let out = moddiag(&["report", "diff", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("checksum mismatch"));
}

#[test]
fn failing_suite_exits_one() {
    // a cover whose base does not satisfy the hypothesis at n = 2
    let out = moddiag(&["verify", "--suite", "double-cover", "--param", "covers=(2,1,2)"]);
    assert_eq!(code(&out), 1);
    let report = SuiteReport::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report.payload.failures().count(), 1);
}
