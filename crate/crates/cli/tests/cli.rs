//! Black-box tests of the binary: exit codes, output shapes and byte
//! reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quiver-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

const SAMPLE_QUIVER: &str = r#"{"n": 4, "upper": ["1", "1", "2", "1", "-3", "-1"]}"#;

#[test]
fn mutate_applies_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let out_path = dir.path().join("out.json");
    let out = run(&[
        "mutate",
        "--in",
        &input,
        "--seq",
        "4",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(7, 3, -2, 1, 3, 1)"), "{text}");
    assert!(text.contains("Pf -4"), "{text}");
    let written = fs::read_to_string(&out_path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(value["upper"][0], "7");
}

#[test]
fn mutate_involution_restores_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let out_path = dir.path().join("out.json");
    let out = run(&[
        "mutate",
        "--in",
        &input,
        "--seq",
        "2,2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let original: serde_json::Value = serde_json::from_str(SAMPLE_QUIVER).unwrap();
    assert_eq!(written, original);
}

#[test]
fn mutate_empty_sequence_copies_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let out_path = dir.path().join("out.json");
    let out = run(&[
        "mutate",
        "--in",
        &input,
        "--seq",
        "",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let original: serde_json::Value = serde_json::from_str(SAMPLE_QUIVER).unwrap();
    assert_eq!(written, original);
}

#[test]
fn mutate_bad_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", "{ not json");
    let out = run(&["mutate", "--in", &input, "--seq", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let missing = run(&["mutate", "--in", "/nonexistent/q.json", "--seq", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn mutate_bad_vertex_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    assert_eq!(
        run(&["mutate", "--in", &input, "--seq", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["mutate", "--in", &input, "--seq", "x"]).status.code(),
        Some(2)
    );
}

#[test]
fn carriage_graph_headlines() {
    for (n, expect) in [
        ("4", "1 component: 64"),
        ("3", "2 components: 4, 4"),
        ("2", "2 components: 1, 1"),
    ] {
        let out = run(&["carriage-graph", "--n", n]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), expect);
    }
}

#[test]
fn carriage_graph_cap_exits_2() {
    let out = run(&["carriage-graph", "--n", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let raised = run(&["carriage-graph", "--n", "6", "--cap", "6"]);
    assert!(raised.status.success());
}

#[test]
fn check_builtins_verify() {
    for name in ["det", "markov"] {
        let out = run(&["check", "--invariant", name]);
        assert!(out.status.success(), "{name}");
        assert!(stdout(&out).contains("verified"));
    }
}

#[test]
fn check_invariant_file_round_trip() {
    // Write the markov invariant through the search basis machinery: a
    // file produced by the library must verify through the CLI.
    let dir = tempfile::tempdir().unwrap();
    let markov = quiver_lab::invariant::markov_invariant(3).unwrap();
    let path = write(dir.path(), "markov.json", &markov.to_json_string());
    let out = run(&["check", "--invariant", &path]);
    assert!(out.status.success());
}

#[test]
fn check_non_invariant_exits_1_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let x12 = quiver_lab::invariant::CarriageWisePolynomial::uniform(
        4,
        quiver_lab::poly::Poly::var(6, 0),
    );
    let path = write(dir.path(), "x12.json", &x12.to_json_string());
    let out = bin()
        .args(["check", "--invariant", &path, "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["verified"], false);
    assert!(value["witness"]["counterexample"]["quiver"].is_array());
}

#[test]
fn check_garbage_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "garbage.json", "[1,2,3]");
    assert_eq!(run(&["check", "--invariant", &path]).status.code(), Some(2));
}

#[test]
fn search_n3_reports_dimension_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("basis.json");
    let out = run(&[
        "search",
        "--n",
        "3",
        "--degree",
        "3",
        "--mode",
        "full",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dimension 2"));
    // The piecewise element is reported alongside the constants.
    assert!(text.contains("x12*x13*x23"), "{text}");
    let basis: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(basis["dimension"], 2);
    assert_eq!(basis["verified"], true);
    assert_eq!(basis["mode"], "full");
}

#[test]
fn search_n2_reports_the_computed_dimension() {
    // Both mutations negate the single entry, but the two carriages keep
    // separate pieces, so degree 2 admits the constants, the glued odd
    // tuple and the square: dimension 3.
    let out = run(&["search", "--n", "2", "--degree", "2", "--mode", "full"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("dimension 3"));
}

#[test]
fn search_guard_exits_2_without_force() {
    let out = run(&["search", "--n", "4", "--degree", "3", "--mode", "full"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_json_is_byte_stable() {
    let first = run(&[
        "search",
        "--n",
        "3",
        "--degree",
        "2",
        "--mode",
        "collapsed",
        "--json",
    ]);
    let second = run(&[
        "search",
        "--n",
        "3",
        "--degree",
        "2",
        "--mode",
        "collapsed",
        "--json",
    ]);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn orbit_watch_det_is_constant_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    // Start with a finite mutation orbit, so a long exact walk stays small.
    let input = write(
        dir.path(),
        "q.json",
        r#"{"n": 4, "upper": ["-2", "1", "1", "-1", "-1", "-1"]}"#,
    );
    let args = [
        "orbit", "--in", &input, "--steps", "1000", "--seed", "7", "--watch", "det", "--json",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["steps"].as_array().unwrap().len(), 1001);
    let values: Vec<&serde_json::Value> = report["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| &s["watched"][0])
        .collect();
    assert!(values.iter().all(|v| **v == values[0].clone()));
}

#[test]
fn orbit_zero_steps_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let out = run(&[
        "orbit", "--in", &input, "--steps", "0", "--seed", "3", "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["steps"].as_array().unwrap().len(), 1);
    assert_eq!(report["steps"][0]["vertex"], serde_json::Value::Null);
}

#[test]
fn orbit_rejects_a_non_invariant_watch() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let x12 = quiver_lab::invariant::CarriageWisePolynomial::uniform(
        4,
        quiver_lab::poly::Poly::var(6, 0),
    );
    let watch = write(dir.path(), "x12.json", &x12.to_json_string());
    let out = run(&[
        "orbit", "--in", &input, "--steps", "5", "--seed", "1", "--watch", &watch,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orbit_watch_size_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", SAMPLE_QUIVER);
    let out = run(&[
        "orbit", "--in", &input, "--steps", "5", "--seed", "1", "--watch", "markov",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_2() {
    assert_eq!(run(&["mutate", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}
