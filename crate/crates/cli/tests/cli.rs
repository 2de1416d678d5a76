use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dmf_core::catalog;
use dmf_core::io::{graph_from_dot, graph_to_json};
use serde_json::Value;
use tempfile::TempDir;

fn dmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmf"))
        .args(args)
        .output()
        .expect("dmf runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const OCTAHEDRON: &str = r#"{"vertices":["a","b","c","d","e","f"],
 "edges":[["a","c"],["a","d"],["a","e"],["a","f"],["b","c"],["b","d"],["b","e"],["b","f"],
          ["c","e"],["c","f"],["d","e"],["d","f"]]}"#;

#[test]
fn classify_octahedron() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "octahedron.json", OCTAHEDRON);
    let out = dmf(&["classify", s(&g), "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"kind":"Sphere","dimension":2}"#
    );
}

#[test]
fn classify_failure_exits_one() {
    let out = dmf(&["classify", "catalog:torus16", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "None");
    assert!(v["witness"].is_string());
}

#[test]
fn invariants_torus() {
    let dir = TempDir::new().unwrap();
    let g = write(
        dir.path(),
        "torus16.json",
        &graph_to_json(&catalog::get("torus16").unwrap().entry.graph),
    );
    let out = dmf(&["invariants", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["euler"], 0);
    assert_eq!(v["betti_q"], serde_json::json!([1, 2, 1]));
}

#[test]
fn cover_validation_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad_overlap.json",
        r#"{"ambient":2,"n":2,"cells":[{"lo":[0,0],"hi":[2,2]},{"lo":[1,1],"hi":[3,3]}]}"#,
    );
    let out = dmf(&["cover", "validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], false);
    let clauses: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["clause"].as_str().unwrap())
        .collect();
    assert!(clauses.contains(&"LL-boundary"), "{clauses:?}");

    let good = write(
        dir.path(),
        "pair.json",
        r#"{"ambient":2,"n":2,"cells":[{"lo":[0,0],"hi":[1,1]},{"lo":[1,0],"hi":[2,1]}]}"#,
    );
    assert_eq!(dmf(&["cover", "validate", s(&good)]).status.code(), Some(0));
    let nerve = stdout_json(&dmf(&["cover", "nerve", s(&good)]));
    assert_eq!(nerve["edges"].as_array().unwrap().len(), 1);
    let trace = dmf(&["cover", "trace", s(&good), "--cell", "0"]);
    assert_eq!(trace.status.code(), Some(0));
    assert_eq!(stdout_json(&trace)["isomorphic"], true);
    let merged = dmf(&["cover", "merge", s(&good), "--cells", "0,1"]);
    assert_eq!(merged.status.code(), Some(0));
    assert_eq!(
        stdout_json(&merged)["cover"]["cells"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn malformed_input_exits_two_with_position() {
    let dir = TempDir::new().unwrap();
    let g = write(
        dir.path(),
        "broken.json",
        "{\"vertices\": [\"a\"],\n \"edges\": [[\"a\", ]]}",
    );
    let out = dmf(&["invariants", s(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");

    let missing = dmf(&["reduce", s(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = dmf(&["catalog", "show", "dodecahedron"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn reduce_then_replay() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "disk.txt", "a b\nb c\nc a\nc d\n");
    let out = dmf(&["reduce", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["residue"]["vertices"].as_array().unwrap().len(), 1);
    let trace = write(dir.path(), "trace.json", &v["trace"].to_string());
    let replayed = stdout_json(&dmf(&["replay", s(&g), s(&trace)]));
    assert_eq!(replayed, v["residue"]);
}

#[test]
fn replay_rejects_illegal_step() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "c4.txt", "a b\nb c\nc d\nd a\n");
    let t = write(
        dir.path(),
        "t.json",
        r#"[{"op":"delete-point","vertex":"a"}]"#,
    );
    let out = dmf(&["replay", s(&g), s(&t)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn digitize_bundled_circle() {
    let out = dmf(&["digitize", "circle", "--pitch", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["euler"], 0);
    assert_eq!(v["betti_q"], serde_json::json!([1, 1]));
    assert_eq!(
        dmf(&["digitize", "circle", "--pitch", "zero"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn digitize_shape_file() {
    let dir = TempDir::new().unwrap();
    let shape = write(
        dir.path(),
        "seg.json",
        r#"{"kind":"region","expr":"(* x (- x 1))","window":{"lo":[-1],"hi":[2]},"pitch":"1/4"}"#,
    );
    let v = stdout_json(&dmf(&["digitize", s(&shape)]));
    assert_eq!(v["residue"]["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn export_dot_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in ["icosahedron", "klein16", "rp11"] {
        let g = catalog::get(name).unwrap().entry.graph;
        let path = write(dir.path(), &format!("{name}.json"), &graph_to_json(&g));
        let out = dmf(&["export-dot", s(&path)]);
        assert_eq!(out.status.code(), Some(0));
        let back = graph_from_dot(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(back.canonical_key(), g.canonical_key());
    }
}

#[test]
fn catalog_show_and_determinism() {
    let a = dmf(&["catalog", "show", "moebius12", "--pretty"]);
    let b = dmf(&["catalog", "show", "moebius12", "--pretty", "--seed", "99"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(
        v["entry"]["graph"]["vertices"].as_array().unwrap().len(),
        12
    );
    let listed = stdout_json(&dmf(&["catalog", "list"]));
    assert!(listed.as_array().unwrap().iter().any(|n| n == "rp11"));
}

#[test]
fn memo_cap_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_dmf"))
        .args(["classify", "catalog:icosahedron"])
        .env("DMF_MEMO_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_dmf"))
        .args(["catalog", "list"])
        .env("DMF_MEMO_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
