//! End to end tests that spawn the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cremona"))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary spawns")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classifies_a_symbolic_nodal_type() {
    let out = run(&["classify", "--realize", "(d;d-3,2^{3(d-2)})", "--d", "12"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["curve_type"], "(12;9,2^30)");
    assert_eq!(doc["family"], "drop3-nodal");
    assert_eq!(doc["vanishing_adjoints"], true);
    assert_eq!(doc["contractible"]["verdict"], "not-contractible");
    assert_eq!(doc["contractible"]["nonempty_adjoint"]["n"], 2);
    assert_eq!(doc["contractible"]["nonempty_adjoint"]["m"], 3);
    assert_eq!(doc["kodaira"]["verdict"], "non-negative");
}

#[test]
fn contract_then_verify_round_trips() {
    let cert = tmp("pencil12.cert.json");
    let out = run(&[
        "contract",
        "--realize",
        "pencil",
        "--d",
        "12",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["verify", cert.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["initial_type"], "(12;12)");
    assert_eq!(doc["degree"], 12);
    assert_eq!(doc["steps"], 1);
}

#[test]
fn verify_rejects_a_tampered_certificate() {
    let cert = tmp("tamper.cert.json");
    let out = run(&[
        "contract",
        "--realize",
        "pencil",
        "--d",
        "6",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["steps"][0]["map"]["simples"][0][0] = serde_json::Value::String("424242".into());
    std::fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("step"), "stderr names the failing step: {err}");
}

#[test]
fn adjoints_report_for_a_configuration() {
    let out = run(&[
        "adjoints",
        "--config",
        "(6; {1,2,3}, {1,4,5})",
        "--realize-seed",
        "7",
        "-n",
        "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["n"], 1);
    assert_eq!(doc["start_m"], 1);
    assert_eq!(doc["dims"], serde_json::json!([-1]));
}

#[test]
fn realized_arrangements_classify_from_file() {
    let arr = tmp("nearpencil7.json");
    let out = run(&[
        "realize",
        "--realize",
        "near-pencil",
        "--d",
        "7",
        "--out",
        arr.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&arr).unwrap()).unwrap();
    assert_eq!(doc["curve_type"], "(7;6,2^6)");
    assert_eq!(doc["d"], 7);
    assert_eq!(doc["lines"].as_array().unwrap().len(), 7);

    let out = run(&["classify", "--lines", arr.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["family"], "near-pencil");
    assert_eq!(doc["contractible"]["verdict"], "contractible");
}

#[test]
fn identical_invocations_emit_identical_bytes() {
    let a = run(&["classify", "--realize", "drop2-triple", "--d", "12", "--seed", "5"]);
    let b = run(&["classify", "--realize", "drop2-triple", "--d", "12", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_sources_are_mutually_exclusive() {
    let out = run(&[
        "classify",
        "--realize",
        "pencil",
        "--d",
        "5",
        "--config",
        "(3;{1,2,3})",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["classify"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["classify", "--realize", "pencil"]);
    assert_eq!(out.status.code(), Some(2), "family names need --d");

    let out = run(&["classify", "--realize", "(d;d)", "--d", "0"]);
    assert_eq!(out.status.code(), Some(2), "degree must be positive");
}

#[test]
fn transform_reports_the_degree_formula() {
    let arr = tmp("triangle.json");
    let out = run(&[
        "realize",
        "--realize",
        "(3;2^3)",
        "--out",
        arr.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // Base the quadratic at the three vertices: every side joins two base
    // points, so the whole triangle contracts.
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&arr).unwrap()).unwrap();
    let lines: Vec<cremona::projective::ProjLine> =
        serde_json::from_value(doc["lines"].clone()).unwrap();
    let vertex = |i: usize, j: usize| -> serde_json::Value {
        let p = cremona::projective::meet(&lines[i], &lines[j]).unwrap();
        serde_json::to_value(p).unwrap()
    };
    let map = serde_json::json!({
        "kind": "quadratic",
        "base": [vertex(0, 1), vertex(1, 2), vertex(0, 2)],
    });

    let out = run(&[
        "transform",
        "--lines",
        arr.to_str().unwrap(),
        "--map",
        &map.to_string(),
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["homaloidal"], true);
    assert_eq!(doc["map_degree"], 2);
    assert_eq!(doc["predicted_image_degree"], 0);
    assert_eq!(doc["actual_image_degree"], 0);
    assert_eq!(doc["degree_formula_ok"], true);
    assert_eq!(doc["image_type"], serde_json::Value::Null);
    assert_eq!(doc["contracted"].as_array().unwrap().len(), 3);
}

#[test]
fn text_format_summarizes_the_verdict() {
    let out = run(&[
        "classify",
        "--realize",
        "(d;d-1,2^{d-1})",
        "--d",
        "9",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("type: (9;8,2^8)"), "{text}");
    assert!(text.contains("family: near-pencil"), "{text}");
    assert!(text.contains("contractible: yes"), "{text}");
}
