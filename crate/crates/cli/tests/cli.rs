//! End-to-end checks of the `tbt` binary: output shapes, verdicts,
//! exit codes and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .expect("fixture path is utf-8")
        .to_string()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_str()
        .expect("data path is utf-8")
        .to_string()
}

fn tbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn hamming_args(extra: &[&str]) -> Vec<String> {
    let mut args = vec![
        "--g".to_string(),
        fixture("hamming74/g.txt"),
        "--h".to_string(),
        fixture("hamming74/h.txt"),
        "--spans".to_string(),
        fixture("hamming74/spans.txt"),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    args
}

fn run_hamming(command: &str, extra: &[&str]) -> Output {
    let mut args = vec![command.to_string()];
    args.extend(hamming_args(extra));
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    tbt(&arg_refs)
}

#[test]
fn build_reports_published_profile() {
    for method in ["tbbcjr", "algebraic", "kv", "emsgm"] {
        let output = run_hamming("build", &["--method", method, "--format", "json"]);
        assert_eq!(code(&output), 0, "{}", stderr(&output));
        let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
        assert_eq!(value["command"], "build");
        assert_eq!(value["method"], method);
        assert_eq!(value["n"], 7);
        assert_eq!(value["k"], 4);
        assert_eq!(
            value["vertex_counts"],
            serde_json::json!([2, 4, 4, 4, 4, 4, 2]),
            "profile for {method}"
        );
        assert!(value["trellis"]["levels"].is_array() || value["trellis"].is_object());
    }
}

#[test]
fn build_output_is_deterministic() {
    let first = run_hamming("build", &["--method", "tbbcjr", "--format", "json"]);
    let second = run_hamming("build", &["--method", "tbbcjr", "--format", "json"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");
}

#[test]
fn build_emits_dot() {
    let output = run_hamming("build", &["--method", "emsgm", "--format", "dot"]);
    assert_eq!(code(&output), 0);
    let text = stdout(&output);
    assert!(text.starts_with("digraph"), "{text}");
    assert!(text.contains("->"));
}

#[test]
fn build_derives_parity_when_omitted() {
    let output = tbt(&[
        "build",
        "--g",
        &fixture("hamming74/g.txt"),
        "--spans",
        &fixture("hamming74/spans.txt"),
        "--method",
        "tbbcjr",
    ]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    assert!(stdout(&output).contains("vertices 2 4 4 4 4 4 2"));
}

#[test]
fn build_dual_shares_the_vertex_profile() {
    let output = run_hamming("build", &["--method", "dual"]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("vertices 2 4 4 4 4 4 2"));
}

#[test]
fn malformed_row_is_an_input_error() {
    let output = tbt(&[
        "build",
        "--g",
        &data("bad_row.txt"),
        "--spans",
        &fixture("hamming74/spans.txt"),
        "--method",
        "tbbcjr",
    ]);
    assert_eq!(code(&output), 2);
    assert!(
        stderr(&output).contains("row 3: expected 7 entries"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn missing_file_is_an_input_error() {
    let output = tbt(&[
        "build",
        "--g",
        &fixture("hamming74/no_such_file.txt"),
        "--spans",
        &fixture("hamming74/spans.txt"),
        "--method",
        "tbbcjr",
    ]);
    assert_eq!(code(&output), 2);
}

#[test]
fn compare_product_and_direct_builds_identical() {
    let output = run_hamming(
        "compare",
        &["--method-a", "kv", "--method-b", "emsgm", "--expect", "identical"],
    );
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    assert_eq!(stdout(&output).trim(), "identical");
}

#[test]
fn compare_product_and_syndrome_isomorphic() {
    let output = run_hamming(
        "compare",
        &["--method-a", "kv", "--method-b", "tbbcjr", "--expect", "isomorphic"],
    );
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    assert!(stdout(&output).starts_with("isomorphic"), "{}", stdout(&output));
}

#[test]
fn compare_across_span_lists_reports_distinct() {
    let alt: Vec<String> = vec![
        "--g2".into(),
        fixture("hamming74_alt/g.txt"),
        "--h2".into(),
        fixture("hamming74_alt/h.txt"),
        "--spans2".into(),
        fixture("hamming74_alt/spans.txt"),
    ];
    let mut extra: Vec<&str> = vec!["--method-a", "tbbcjr", "--method-b", "tbbcjr"];
    extra.extend(alt.iter().map(String::as_str));

    let output = run_hamming("compare", &extra);
    assert_eq!(code(&output), 0, "verdict alone is a success");
    assert!(stdout(&output).starts_with("distinct"), "{}", stdout(&output));

    extra.extend(["--expect", "isomorphic"]);
    let expecting = run_hamming("compare", &extra);
    assert_eq!(code(&expecting), 1, "expectation mismatch fails");
}

#[test]
fn metrics_confirms_the_formulas() {
    let output = run_hamming("metrics", &[]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    assert!(stdout(&output).contains("all levels match the predictions"));
}

#[test]
fn metrics_prints_the_duality_identities() {
    let dual: Vec<String> = vec![
        "--dual-h".into(),
        fixture("hamming74/dual_h.txt"),
        "--dual-spans".into(),
        fixture("hamming74/dual_spans.txt"),
    ];
    let extra: Vec<&str> = dual.iter().map(String::as_str).collect();
    let output = run_hamming("metrics", &extra);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("position 7: edge_dim=2 dual_edge_dim=1 OK"), "{text}");
    assert!(text.contains("position 7: alpha 2 alpha^ 1 OK"), "{text}");
    assert!(!text.contains("MISMATCH"), "{text}");
}

#[test]
fn proptest_is_reproducible_and_passes() {
    let first = tbt(&["proptest", "--seed", "1", "--count", "5"]);
    let second = tbt(&["proptest", "--seed", "1", "--count", "5"]);
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert!(stdout(&first).contains("5 passed, 0 failed"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn proptest_zero_count_trivially_passes() {
    let output = tbt(&["proptest", "--count", "0"]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("0 passed, 0 failed"));
}

#[test]
fn proptest_injected_fault_emits_counterexample() {
    let output = tbt(&["proptest", "--seed", "1", "--count", "1", "--inject-fault"]);
    assert_eq!(code(&output), 1);
    let text = stdout(&output);
    assert!(text.contains("injected fault"), "{text}");
    assert!(text.contains("span"), "counterexample spec is shown: {text}");
}

#[test]
fn partial_second_spec_is_rejected() {
    let output = run_hamming(
        "compare",
        &[
            "--method-a",
            "tbbcjr",
            "--method-b",
            "tbbcjr",
            "--g2",
            &fixture("hamming74_alt/g.txt"),
        ],
    );
    assert_eq!(code(&output), 2);
    assert!(stderr(&output).contains("--g2 and --spans2"), "{}", stderr(&output));
}
