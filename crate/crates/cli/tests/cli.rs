use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const LINE: &str = r#"{
  "ambient_dim": 2,
  "vertices": [["0", "0"]],
  "rays": [[1, 0], [0, 1], [-1, -1]],
  "cells": [{"v": [0], "r": [0], "weight": 1}, {"v": [0], "r": [1], "weight": 1}, {"v": [0], "r": [2], "weight": W}]
}"#;

const CROSS: &str = r#"{
  "ambient_dim": 2,
  "vertices": [["0", "0"]],
  "rays": [[1, 0], [-1, 0], [0, 1], [0, -1]],
  "cells": [{"v": [0], "r": [0], "weight": 1}, {"v": [0], "r": [1], "weight": 1},
            {"v": [0], "r": [2], "weight": 1}, {"v": [0], "r": [3], "weight": 1}]
}"#;

fn tropkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropkit")).args(args).output().expect("binary runs")
}

fn tropkit_threads(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropkit"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn balanced_line_passes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &LINE.replace('W', "1"));
    let o = tropkit(&["complex", "validate", s(&f), "--checks", "balancing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] balancing"));
}

#[test]
fn unbalanced_line_fails_with_defect() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &LINE.replace('W', "2"));
    let o = tropkit(&["--json", "complex", "validate", s(&f), "--checks", "balancing"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["checks"][1]["witness"]["unbalanced"][0]["defect"], serde_json::json!(["-1", "-1"]));
}

#[test]
fn cross_is_balanced_but_not_q_smooth() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cross.json", CROSS);
    let o = tropkit(&["--json", "complex", "validate", s(&f), "--checks", "balancing,qsmooth"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["checks"][1]["verdict"], "pass");
    assert_eq!(r["checks"][2]["verdict"], "fail");
    assert_eq!(r["checks"][2]["witness"]["cells"][0]["kernel_dim"], 2);
}

#[test]
fn chow_sweep_for_u23() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u23.json", r#"{"type": "uniform", "r": 2, "n": 3}"#);
    let o = tropkit(&["--json", "matroid", "chow", s(&f), "--all-p", "--check", "hl,hr"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["checks"][2]["name"], "hodge_riemann_p0");
    assert_eq!(r["checks"][2]["detail"]["signature"], serde_json::json!({"n_plus": 1, "n_zero": 0, "n_minus": 0}));
    let o = tropkit(&["matroid", "chow", s(&f), "--p", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matroid_subcommands() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "k4.json", r#"{"type": "graphic", "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]], "label": "K4"}"#);
    for sub in ["info", "chi", "logconcave"] {
        let o = tropkit(&["matroid", sub, s(&f)]);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", stdout(&o));
    }
    let o = tropkit(&["--json", "matroid", "chi", s(&f)]);
    assert_eq!(json(&o)["checks"][0]["detail"]["coefficients"], serde_json::json!([-6, 11, -6, 1]));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{ not json");
    assert_eq!(tropkit(&["complex", "validate", s(&bad)]).status.code(), Some(2));
    assert_eq!(tropkit(&["matroid", "info", s(&bad)]).status.code(), Some(2));
    assert_eq!(tropkit(&["matroid", "info", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(tropkit(&["matroid", "frobnicate"]).status.code(), Some(2));
    let f = write(&dir, "line.json", &LINE.replace('W', "1"));
    assert_eq!(tropkit(&["complex", "validate", s(&f), "--checks", "nope"]).status.code(), Some(2));
    // Unbounded input needs --compactify.
    assert_eq!(tropkit(&["complex", "cohomology", s(&f), "--p", "0"]).status.code(), Some(2));
}

#[test]
fn zero_weight_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &LINE.replace('W', "0"));
    let o = tropkit(&["--json", "complex", "validate", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["checks"][0]["witness"]["error"].as_str().unwrap().contains("zero or missing weight"));
    assert_eq!(tropkit(&["complex", "cohomology", s(&f), "--p", "0", "--compactify"]).status.code(), Some(2));
}

#[test]
fn bergman_round_trip_and_star() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("u34.json");
    let o = tropkit(&["complex", "bergman", "--uniform", "3,4", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let o = tropkit(&["complex", "validate", s(&out), "--checks", "balancing,qsmooth"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // Printing to stdout gives the same document.
    let printed = tropkit(&["complex", "bergman", "--uniform", "3,4"]);
    assert_eq!(stdout(&printed), std::fs::read_to_string(&out).unwrap());
    let star = tropkit(&["complex", "star", s(&out), "--cell", "1"]);
    assert_eq!(star.status.code(), Some(0));
    let sf = write(&dir, "star.json", &stdout(&star));
    assert_eq!(tropkit(&["complex", "validate", s(&sf), "--checks", "balancing"]).status.code(), Some(0));
    assert_eq!(tropkit(&["complex", "star", s(&out), "--cell", "999"]).status.code(), Some(2));
    assert_eq!(tropkit(&["complex", "bergman", "--uniform", "3"]).status.code(), Some(2));
}

#[test]
fn cohomology_of_compactified_line() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "line.json", &LINE.replace('W', "1"));
    for (p, h) in [(0, serde_json::json!([1, 0])), (1, serde_json::json!([0, 1]))] {
        let o = tropkit(&["--json", "complex", "cohomology", s(&f), "--p", &p.to_string(), "--compactify"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json(&o)["checks"][0]["detail"]["h"], h);
    }
}

#[test]
fn hodge_commands() {
    let dir = TempDir::new().unwrap();
    let line = write(&dir, "line.json", &LINE.replace('W', "1"));
    for gram in ["identity", "weighted", "seed:4"] {
        let o = tropkit(&["hodge", "verify", s(&line), "--p", "1", "--gram", gram]);
        assert_eq!(o.status.code(), Some(0), "{gram}: {}", stdout(&o));
    }
    let cochain = write(&dir, "interval.json", r#"{"dims": [2, 1], "differentials": [[["1", "-1"]]]}"#);
    let o = tropkit(&["hodge", "verify", s(&cochain), "--gram", "seed:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(tropkit(&["hodge", "verify", s(&cochain), "--gram", "weighted"]).status.code(), Some(2));
    assert_eq!(tropkit(&["hodge", "verify", s(&line)]).status.code(), Some(2));
    let form = write(&dir, "form.json", r#"["3", "1/2"]"#);
    let o = tropkit(&["--json", "hodge", "decompose", s(&cochain), "--q", "0", "--form", s(&form)]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["checks"][0]["detail"]["harmonic"], serde_json::json!(["7/4", "7/4"]));
    assert_eq!(r["checks"][0]["detail"]["coexact"], serde_json::json!(["5/4", "-5/4"]));
    let bad = write(&dir, "form2.json", r#"["1"]"#);
    assert_eq!(tropkit(&["hodge", "decompose", s(&cochain), "--q", "0", "--form", s(&bad)]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_across_threads() {
    let dir = TempDir::new().unwrap();
    let fan = dir.path().join("u34.json");
    assert_eq!(tropkit(&["complex", "bergman", "--uniform", "3,4", "-o", s(&fan)]).status.code(), Some(0));
    let m = write(&dir, "u45.json", r#"{"type": "uniform", "r": 4, "n": 5}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "complex", "validate", s(&fan), "--checks", "balancing,qsmooth"],
        vec!["--json", "complex", "cohomology", s(&fan), "--p", "1", "--compactify"],
        vec!["--json", "hodge", "verify", s(&fan), "--p", "0", "--gram", "seed:9", "--samples", "2"],
        vec!["--json", "matroid", "chow", s(&m)],
    ];
    for args in runs {
        let a = tropkit_threads(&args, 1);
        let b = tropkit_threads(&args, 4);
        let c = tropkit_threads(&args, 4);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(b.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u23.json", r#"{"type": "uniform", "r": 2, "n": 3}"#);
    assert!(json(&tropkit(&["--json", "matroid", "info", s(&f)])).get("timing_ms").is_none());
    assert!(json(&tropkit(&["--json", "--timing", "matroid", "info", s(&f)])).get("timing_ms").is_some());
}
