use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qtorus")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn fixture(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("report is JSON")
}

#[test]
fn analyze_reports_radical_data() {
    let dir = tempfile::tempdir().unwrap();
    let q = fixture(dir.path(), "q.json", "[[1, [1,2]], [[1,2], 1]]");
    let (code, out) = run(&["analyze", "--input", q.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["invariants_k"], serde_json::json!([2]));
    assert_eq!((r["z"].as_u64(), r["N"].as_u64(), r["gamma_order"].as_u64()), (Some(1), Some(2), Some(4)));

    let ones = fixture(dir.path(), "ones.json", r#"{"q": [[1, 1], [1, 1]]}"#);
    let r = json(&run(&["analyze", "--input", ones.to_str().unwrap()]).1);
    assert_eq!((r["z"].as_u64(), r["N"].as_u64(), r["gamma_order"].as_u64()), (Some(0), Some(1), Some(1)));

    for (name, text) in [
        ("asym.json", "[[1, [1,4]], [[1,4], 1]]"),
        ("not_root.json", r#"[[1, {"order": 1, "coeffs": ["2"]}], [{"order": 1, "coeffs": ["1/2"]}, 1]]"#),
        ("garbage.json", "{"),
    ] {
        let p = fixture(dir.path(), name, text);
        assert_eq!(run(&["analyze", "--input", p.to_str().unwrap()]).0, 2, "{name}");
    }
}

#[test]
fn non_normal_q_is_verified_on_its_normal_form() {
    let dir = tempfile::tempdir().unwrap();
    let q = fixture(dir.path(), "q.json", r#"{"schema": 1, "q": [[1, [2,3], 1], [[1,3], 1, [2,3]], [1, [1,3], 1]]}"#);
    let (code, out) = run(&["analyze", "--input", q.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["normal_form"], false);
    assert_eq!(r["invariants_k"], serde_json::json!([3]));
    assert_eq!(r["z"], 1);
    let (code, out) = run(&["verify", "--input", q.to_str().unwrap(), "--suite", "loop-hom,jacobi,radical", "--window", "2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn module_reports() {
    let dir = tempfile::tempdir().unwrap();
    let witt = fixture(
        dir.path(),
        "witt.json",
        r#"{"schema": 1, "q": [[1, 1], [1, 1]], "seed": 4,
            "module": {"V": {"lambda": [], "b": 0}, "W": "trivial", "alpha": [1, -1]}}"#,
    );
    let (code, out) = run(&["module", "--input", witt.to_str().unwrap(), "--window", "4"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["probe"]["verdict"], "window-reducible");
    assert_eq!(r["minimal_l"]["l"], 2);
    assert!(r["cover"].as_array().unwrap().iter().all(|c| c["vacuous"] == true));

    let c1 = fixture(
        dir.path(),
        "c1.json",
        r#"{"schema": 1, "q": [[1, [1,2]], [[1,2], 1]],
            "module": {"V": {"lambda": [1], "b": 5}, "W": "left-regular", "alpha": ["1/2", "1/3"]}}"#,
    );
    let out_path = dir.path().join("report.json");
    let (code, out) = run(&["module", "--input", c1.to_str().unwrap(), "--window", "2", "--output", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), out);
    let r = json(&out);
    assert_eq!(r["uniform_dim"], true);
    assert_eq!(r["max_weight_dim"], 2);
    assert_eq!(r["minimal_l"]["l"], 3);
    for c in r["cover"].as_array().unwrap() {
        assert_eq!(c["stable"], true);
        assert_eq!(c["within_bound"], true);
    }
}

#[test]
fn invalid_descriptors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let zero_e = fixture(
        dir.path(),
        "adjoint.json",
        r#"{"q": [[1, [1,2]], [[1,2], 1]], "module": {"V": {"lambda": [1], "b": 1}, "alpha": [0, 0],
            "W": {"N": 2, "dim": 1, "grading": [0], "action": {"0,0": [[0]], "0,1": [[0]], "1,0": [[0]], "1,1": [[0]]}}}}"#,
    );
    let wrong_n = fixture(
        dir.path(),
        "trivial_w.json",
        r#"{"q": [[1, [1,2]], [[1,2], 1]], "module": {"V": {"lambda": [1], "b": 1}, "W": "trivial", "alpha": [0, 0]}}"#,
    );
    let bad_lambda = fixture(
        dir.path(),
        "lambda.json",
        r#"{"q": [[1, 1], [1, 1]], "module": {"V": {"lambda": [1, 1, 1], "b": 1}, "W": "trivial", "alpha": [0, 0]}}"#,
    );
    let no_module = fixture(dir.path(), "none.json", r#"{"q": [[1, 1], [1, 1]]}"#);
    for p in [&zero_e, &wrong_n, &bad_lambda, &no_module] {
        assert_eq!(run(&["module", "--input", p.to_str().unwrap()]).0, 2, "{p:?}");
    }
    assert_eq!(run(&["verify", "--input", no_module.to_str().unwrap(), "--suite", "rep"]).0, 2);
}

#[test]
fn corrupted_module_fails_rep_with_a_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let p = fixture(
        dir.path(),
        "corrupt.json",
        r#"{"q": [[1, [1,2]], [[1,2], 1]], "window": 2, "fault": {"module_action": true},
            "module": {"V": {"lambda": [1], "b": 1}, "W": "left-regular", "alpha": ["1/2", "1/3"]}}"#,
    );
    let (code, out) = run(&["verify", "--input", p.to_str().unwrap(), "--suite", "rep"]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!(r["suites"][0]["passed"], false);
    assert!(r["suites"][0]["counterexample"]["law"].is_string());
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify"]).0, 2);
}
