use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tesler-alpha"))
        .args(args)
        .env_remove("TESLER_ALPHA_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn face_counts() {
    assert_eq!(json(&["faces", "--n", "3", "--codim", "2"])["count"], 9);
    assert_eq!(json(&["faces", "--n", "4", "--codim", "1"])["count"], 9);
    assert_eq!(json(&["faces", "--n", "3", "--codim", "3"])["count"], 6);
    assert_eq!(run(&["faces", "--n", "3", "--codim", "4"]).status.code(), Some(2));
}

#[test]
fn alpha_minimum() {
    let o = run(&["alpha", "--n", "3", "--codim", "2", "--min"]);
    assert_eq!(stdout(&o).lines().next(), Some("1/8"));
    let o = run(&["alpha", "--n", "4", "--codim", "3", "--min"]);
    assert_eq!(stdout(&o).lines().next(), Some("1/24"));
    let v = json(&["alpha", "--n", "5", "--codim", "0"]);
    assert_eq!(v["faces"][0]["alpha"], "1/1");
    assert_eq!(run(&["alpha", "--n", "4", "--codim", "4"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--n", "4", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    assert_eq!(run(&["verify", "--n", "2"]).status.code(), Some(2));
    let v = json(&["verify", "--n", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["codim2_faces"], 9);
    assert_eq!(v["codim3_faces"], 6);
}

#[test]
fn verify_csv_has_one_row_per_face() {
    let o = run(&["--format", "csv", "verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("support,codim,case"));
    assert_eq!(lines.count(), 35 + 76);
}

#[test]
fn ehrhart_small() {
    let o = run(&["ehrhart", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("E(t) = t + 1"));
    assert!(text.contains("McMullen PASS"));
    let v = json(&["ehrhart", "--n", "3"]);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["coefficients"][0], "1/1");
    assert_eq!(v["sample_counts"][1][1], 7);
    assert_eq!(v["passed"], true);
    assert_eq!(run(&["ehrhart", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn hook_sum_flag() {
    let o = run(&["faces", "--n", "4", "--a", "0,1,2,1", "--codim", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leading zero"));
    assert!(stdout(&o).starts_with("n = 3"));
    assert_eq!(run(&["faces", "--n", "3", "--a", "1,1", "--codim", "0"]).status.code(), Some(2));
    assert_eq!(run(&["faces", "--n", "3", "--a", "1,-1,1", "--codim", "0"]).status.code(), Some(2));
    assert_eq!(run(&["faces", "--n", "3", "--a", "1,0,1", "--codim", "0"]).status.code(), Some(2));
    assert_eq!(run(&["faces", "--n", "1", "--codim", "0"]).status.code(), Some(2));
}

#[test]
fn json_independent_of_jobs() {
    let a = run(&["--format", "json", "--jobs", "1", "verify", "--n", "4"]);
    let b = run(&["--format", "json", "--jobs", "3", "verify", "--n", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_tesler-alpha"))
        .args(["--format", "json", "verify", "--n", "4"])
        .env("TESLER_ALPHA_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(run(&["--jobs", "0", "faces", "--n", "3", "--codim", "1"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("faces.csv");
    let o = run(&["--format", "csv", "--out", path.to_str().unwrap(), "faces", "--n", "3", "--codim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string(v).unwrap()).unwrap();
}

#[test]
fn deformation_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let map = dir.path().join("map.json");
    let graph = json(&["vertices", "--n", "3"]);
    write(&p, &graph);
    let count = graph["vertices"].as_array().unwrap().len();
    let ident: Vec<usize> = (0..count).collect();
    write(&map, &serde_json::json!(ident));
    let ps = p.to_str().unwrap();
    let ms = map.to_str().unwrap();

    let o = run(&["deformation-check", "--p", ps, "--q", ps, "--map", ms]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Dilation by 2, given as a bare list of matrices.
    let q2 = dir.path().join("q2.json");
    let doubled = json(&["vertices", "--n", "3", "--a", "2,2,2"]);
    write(&q2, &doubled["vertices"]);
    let o = run(&["deformation-check", "--p", ps, "--q", q2.to_str().unwrap(), "--map", ms]);
    assert_eq!(o.status.code(), Some(0));

    // Swapping the endpoints of an edge breaks parallelism.
    let edge = &graph["edges"][0];
    let (v, w) = (edge[0].as_u64().unwrap() as usize, edge[1].as_u64().unwrap() as usize);
    let mut swapped = ident.clone();
    swapped.swap(v, w);
    write(&map, &serde_json::json!(swapped));
    let o = run(&["deformation-check", "--p", ps, "--q", ps, "--map", ms]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("deformation: no"));

    let o = run(&["deformation-check", "--p", ps, "--q", ps, "--map", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
