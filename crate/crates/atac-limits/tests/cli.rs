//! End-to-end tests of the `atac` binary: subcommand output, JSON mode,
//! file round-trips, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn atac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_design(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const TRIANGLE: &str = r#"{"points":["a","b","c"],"blocks":[["a","b"],["a","c"],["b","c"]]}"#;

#[test]
fn limit_reports_value_and_weighting() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_design(dir.path(), "triangle.json", TRIANGLE);
    let out = atac(&["limit", &path]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("limit: 2/3"));
    assert!(text.contains("a: 1/3"));
}

#[test]
fn limit_json_mode_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_design(dir.path(), "triangle.json", TRIANGLE);
    let out = atac(&["limit", &path, "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["limit"], "2/3");
    assert_eq!(v["transversal"].as_array().unwrap().len(), 3);
}

#[test]
fn bounds_single_range_and_csv() {
    let out = atac(&["bounds", "28"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.209539"));

    let out = atac(&["bounds", "--range", "2", "5", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("m,s,"));
    assert!(text.contains("4,2,1/2,0.600000,3/5"));

    let out = atac(&["bounds", "--range", "7", "7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["hktBound"], "3/7");
}

#[test]
fn construct_classify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.json");
    let out = atac(&["construct", "projective", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());

    let out = atac(&["classify", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "projective plane of order 2\n");

    let out = atac(&["classify", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["ProjectivePlane"]["order"], 2);
}

#[test]
fn existence_screen_output() {
    let out = atac(&["existence", "10", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["projectivePlane"]["RuledOut"], "Order10");
}

#[test]
fn search_small_m_and_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");
    let out = atac(&["search", "3", "--witness", witness.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "L(3) = 2/3\n");
    let design: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(design["blocks"].as_array().unwrap().len(), 3);
}

#[test]
fn plan_manifest_json() {
    let out = atac(&["plan", "--machines", "4", "--items", "5", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["limit"], "3/5");
    assert_eq!(v["achievedMaxLoad"], "3/5");
    assert_eq!(v["machines"].as_array().unwrap().len(), 4);
}

#[test]
fn plan_with_items_file() {
    let dir = tempfile::tempdir().unwrap();
    let items = dir.path().join("items.json");
    std::fs::write(
        &items,
        r#"[{"id":"a","size":3},{"id":"b","size":2},{"id":"c","size":1}]"#,
    )
    .unwrap();
    let out = atac(&["plan", "--machines", "3", "--items-file", items.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["groups"].as_object().unwrap().len(), 3);
}

#[test]
fn verify_certificate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let design = write_design(dir.path(), "triangle.json", TRIANGLE);
    let cert = dir.path().join("cert.json");
    let out = atac(&["limit", &design, "--json", "--out", cert.to_str().unwrap()]);
    assert!(out.status.success());

    let out = atac(&["verify-certificate", &design, cert.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "certificate valid: limit 2/3\n");

    // A certificate for the wrong design must fail with a domain error.
    let pencil = write_design(
        dir.path(),
        "pencil.json",
        r#"{"points":["a","b","c","d"],"blocks":[["a","b"],["a","c"],["a","d"],["b","c","d"]]}"#,
    );
    let out = atac(&["verify-certificate", &pencil, cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes_for_errors() {
    // Usage error: unknown subcommand.
    let out = atac(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // Domain error: design file does not exist.
    let out = atac(&["limit", "/nonexistent/design.json"]);
    assert_eq!(out.status.code(), Some(1));

    // Domain error: non prime power order.
    let out = atac(&["construct", "projective", "6"]);
    assert_eq!(out.status.code(), Some(1));

    // Domain error: search out of range.
    let out = atac(&["search", "9"]);
    assert_eq!(out.status.code(), Some(1));
}
