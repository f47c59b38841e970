//! Command-line behavior and golden outputs. Set `UPDATE_GOLDEN=1` to rewrite
//! the files under tests/golden after an intended format change.

use std::path::{Path, PathBuf};

use qacc::cli::{run, EXIT_CAP, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn qacc(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("qacc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden file {name} differs");
}

fn bell() -> String {
    golden_dir().join("bell.json").display().to_string()
}

#[test]
fn synth_report_and_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("parity3.json");
    let (code, out, _) = qacc(&["synth", "parity-from-fanout", "--n", "3", "--out", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    golden("synth_parity_from_fanout_3.txt", &out);
    golden("parity_from_fanout_3.json", &std::fs::read_to_string(&file).unwrap());
    let (_, json, _) = qacc(&["synth", "parity-from-fanout", "--n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["depth"], 3);
}

#[test]
fn graph_outputs() {
    let (code, out, _) = qacc(&["graph", "--example", "colored", "--z", "000", "--x", "100"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("amplitude 100: 1/2\n"));
    golden("graph_colored.txt", &out);
    let (_, out, _) = qacc(&["graph", "--example", "two-path", "--format", "dot"]);
    golden("graph_two_path.dot", &out);
    let (_, out, _) = qacc(&["graph", &bell(), "--z", "00", "--x", "11"]);
    golden("graph_bell.txt", &out);
}

#[test]
fn outputs_are_deterministic() {
    let a = qacc(&["synth", "modq-from-parity", "--q", "3", "--n", "2", "--json"]);
    let b = qacc(&["synth", "modq-from-parity", "--q", "3", "--n", "2", "--json"]);
    assert_eq!(a, b);
    let a = qacc(&["graph", &bell(), "--z", "10", "--format", "dot"]);
    let b = qacc(&["graph", &bell(), "--z", "10", "--format", "dot"]);
    assert_eq!(a, b);
}

#[test]
fn simulate_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("bell.state");
    let (code, _, _) = qacc(&["simulate", &bell(), "--input", "00", "--out", dump.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&dump).unwrap();
    golden("bell_state.txt", &text);
    let s = qacc::sim::StateVector::parse_dump(2, &text).unwrap();
    assert!(s.norm_squared().is_one());
    assert_eq!(s.support_size(), 2);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = qacc(&["verify", "modq-from-parity", "--q", "3", "--n-range", "1..5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.matches("verdict: realized").count(), 5);
    let (code, _, err) = qacc(&["verify", "modq-from-parity", "--q", "3", "--n", "3", "--max-lines", "5"]);
    assert_eq!(code, EXIT_CAP);
    assert!(err.starts_with("error in verify:"));

    // a circuit checked against the wrong reference is a mismatch
    let dir = tempfile::tempdir().unwrap();
    let id = dir.path().join("id.json");
    std::fs::write(&id, qacc::circuit::LayeredCircuit::empty(2).to_json()).unwrap();
    let (code, out, _) = qacc(&["verify", "--circuit", &bell(), "--target", id.to_str().unwrap()]);
    assert_eq!(code, EXIT_MISMATCH, "{out}");
    let (code, _, _) = qacc(&["verify", "--circuit", &bell(), "--target", &bell()]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn decide_exit_codes() {
    let b = bell();
    let (code, out, _) = qacc(&["decide", &b, "--z", "11", "--x", "00", "--mode", "N"]);
    assert_eq!((code, out.lines().next()), (EXIT_OK, Some("verdict: accept")));
    let (code, _, _) = qacc(&["decide", &b, "--z", "01", "--x", "00", "--mode", "N", "--engine", "graph"]);
    assert_eq!(code, EXIT_MISMATCH);
    // probability 1/2 breaks the exact promise
    let (code, out, _) = qacc(&["decide", &b, "--z", "11", "--x", "00", "--mode", "E"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("verdict: invalid"));
    // irrational entries are refused in bounded mode
    let (code, _, err) = qacc(&["decide", &b, "--z", "11", "--x", "00", "--mode", "B"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("rational"));
}

#[test]
fn invalid_input() {
    assert_eq!(qacc(&["frobnicate"]).0, EXIT_INVALID);
    assert_eq!(qacc(&["simulate", "/nonexistent/c.json"]).0, EXIT_INVALID);
    assert_eq!(qacc(&["simulate", &bell(), "--input", "0"]).0, EXIT_INVALID);
    assert_eq!(qacc(&["graph"]).0, EXIT_INVALID);
    assert_eq!(qacc(&["synth", "mod-hat", "--q", "3", "--n", "2"]).0, EXIT_INVALID);
    assert_eq!(qacc(&["selftest", "--only", "99"]).0, EXIT_INVALID);
}

#[test]
fn selftest_single_check() {
    let (code, out, _) = qacc(&["selftest", "--only", "8"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("[PASS]  8 worked graph examples"));
}
