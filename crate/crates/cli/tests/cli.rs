use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect()
}

fn amt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn homology_of_circle() {
    let o = amt(&["homology", path(&fixture("circle.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "deg 0: Z^1\ndeg 1: Z^1\n");
}

#[test]
fn reduce_interval_with_both_engines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reduced.json");
    let maps = dir.path().join("maps.json");
    let o = amt(&[
        "reduce",
        path(&fixture("interval.json")),
        "--matching",
        path(&fixture("interval_matching.json")),
        "--engine",
        "both",
        "--out",
        path(&out),
        "--maps",
        path(&maps),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reduced = std::fs::read_to_string(&out).unwrap();
    assert!(reduced.contains("\"id\": \"x\"") && !reduced.contains("\"id\": \"y\""));
    assert!(reduced.ends_with("\"differential\": []\n}\n"));
    let maps = std::fs::read_to_string(&maps).unwrap();
    assert!(maps.starts_with("{\n  \"f\": {\n    \"shift\": 0,"));
    assert!(maps.contains("\"shift\": 1"));
}

#[test]
fn validate_corrupted_simplex_fails_with_listing() {
    let o = amt(&["validate", path(&fixture("simplex2_corrupted.json"))]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 2);
    assert!(s.contains("012"));
}

#[test]
fn validate_good_complex() {
    let o = amt(&["validate", path(&fixture("circle.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok"));
}

#[test]
fn invalid_matchings_exit_one() {
    for (complex, matching) in [
        ("interval.json", "shared_vertex_matching.json"),
        ("nonunit.json", "nonunit_matching.json"),
        ("square_cycle.json", "square_cycle_matching.json"),
    ] {
        let o = amt(&["reduce", path(&fixture(complex)), "--matching", path(&fixture(matching))]);
        assert_eq!(o.status.code(), Some(1), "{complex}");
    }
}

#[test]
fn too_small_bound_is_a_mathematical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path_graph = dir.path().join("path.json");
    std::fs::write(&path_graph, r#"{"format": "amt-complex/1", "ring": "Z",
        "cells": [{"id": "v0", "degree": 0, "rank": 1}, {"id": "v1", "degree": 0, "rank": 1},
                  {"id": "v2", "degree": 0, "rank": 1}, {"id": "e1", "degree": 1, "rank": 1},
                  {"id": "e2", "degree": 1, "rank": 1}],
        "differential": [{"src": "e1", "tgt": "v0", "matrix": [["-1"]]}, {"src": "e1", "tgt": "v1", "matrix": [["1"]]},
                         {"src": "e2", "tgt": "v1", "matrix": [["-1"]]}, {"src": "e2", "tgt": "v2", "matrix": [["1"]]}]}"#).unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"{"format": "amt-matching/1", "edges": [["e1", "v1"], ["e2", "v2"]]}"#).unwrap();
    let o = amt(&["reduce", path(&path_graph), "--matching", path(&m), "--engine", "hpt", "--max-iterations", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("within bound 1"));
    let o = amt(&["reduce", path(&path_graph), "--matching", path(&m), "--engine", "gamma"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn io_and_argument_errors_exit_two() {
    assert_eq!(amt(&["homology", "/nonexistent/complex.json"]).status.code(), Some(2));
    assert_eq!(amt(&["reduce", path(&fixture("circle.json")), "--engine", "fast"]).status.code(), Some(2));
    assert_eq!(amt(&["homology", path(&fixture("rp2.txt"))]).status.code(), Some(2));
    assert_eq!(amt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn simplicial_match_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("rp2.json");
    let m = dir.path().join("m.json");
    assert!(amt(&["from-simplicial", path(&fixture("rp2.txt")), "--out", path(&c)]).status.success());
    let o = amt(&["homology", path(&c)]);
    assert_eq!(stdout(&o), "deg 0: Z^1\ndeg 1: Z^0 + Z/2\ndeg 2: Z^0\n");
    let o = amt(&["match", path(&c), "--seed", "4", "--out", path(&m)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("matched edges: "));
    let o = amt(&["verify", path(&c), "--matching", path(&m)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("engines: agree") && s.contains("homology: preserved") && s.ends_with("result: ok\n"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn export_dot_marks_matching() {
    let o = amt(&["export-dot", path(&fixture("circle.json")), "--matching", path(&fixture("circle_matching.json"))]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.matches("->").count(), 6);
    assert_eq!(s.matches("style=bold").count(), 2);
    assert_eq!(s.matches("doublecircle").count(), 2);
}

#[test]
fn gen_random_is_deterministic() {
    let args = [
        "gen-random",
        "--cells",
        "20",
        "--max-degree",
        "4",
        "--max-rank",
        "2",
        "--density",
        "0.3",
        "--ring",
        "Q",
        "--seed",
        "7",
    ];
    let a = amt(&args);
    let b = amt(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    std::fs::write(&p, &a.stdout).unwrap();
    assert!(amt(&["validate", path(&p)]).status.success());
    assert_eq!(
        amt(&[
            "gen-random",
            "--cells",
            "3",
            "--max-degree",
            "1",
            "--max-rank",
            "1",
            "--density",
            "2",
            "--ring",
            "Z",
            "--seed",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
}
