use std::path::Path;
use std::process::Command;

use planar_color::cli::run;
use planar_color::io::{read_colors, read_graph, write_colors};
use planar_color::ColorAssignment;

fn sh(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("planar-color").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn generate_color_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (g, c) = (p(dir.path(), "g.json"), p(dir.path(), "c.json"));
    let (code, _, err) = sh(&[
        "generate", "--family", "hexgrid", "--n", "96", "--seed", "3", "--out", &g,
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, err) = sh(&["color", "--in", &g, "--preset", "4col", "--out", &c]);
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(report["colors"].as_u64().unwrap() <= 4);
    assert_eq!(sh(&["verify", "--graph", &g, "--colors", &c]).0, 0);
    assert_eq!(
        read_colors(Path::new(&c)).unwrap().len(),
        read_graph(Path::new(&g)).unwrap().n()
    );
}

#[test]
fn verify_rejects_bad_colorings() {
    let dir = tempfile::tempdir().unwrap();
    let (g, c) = (p(dir.path(), "g.txt"), p(dir.path(), "c.json"));
    assert_eq!(sh(&["generate", "--family", "grid", "--n", "16", "--out", &g]).0, 0);
    let mut bad = ColorAssignment::new(4);
    for v in 1..=16 {
        bad.set(v, 1);
    }
    write_colors(Path::new(&c), &bad).unwrap();
    let (code, _, err) = sh(&["verify", "--graph", &g, "--colors", &c]);
    assert_eq!(code, 1);
    assert!(err.contains("verification failed"), "{err}");
    bad.unset(16);
    write_colors(Path::new(&c), &bad).unwrap();
    assert_eq!(sh(&["verify", "--graph", &g, "--colors", &c]).0, 1);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(
        sh(&["color", "--in", "/nonexistent/graph.json", "--preset", "4col"]).0,
        2
    );
    assert_eq!(sh(&["color", "--family", "grid", "--n", "16", "--preset", "9col"]).0, 2);
    assert_eq!(sh(&["bogus"]).0, 2);
    // triangles are outside the 4-coloring class
    let (code, _, err) = sh(&["color", "--family", "triangulation", "--n", "30", "--preset", "4col"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn partition_audit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = p(dir.path(), "audit.csv");
    let (code, out, _) = sh(&[
        "partition",
        "--family",
        "triangulation",
        "--n",
        "150",
        "--seed",
        "2",
        "--preset",
        "6col",
        "--audit",
        &a,
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 150);
    let text = std::fs::read_to_string(&a).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("iteration,active_before,active_after,ratio"));
    assert!(rows.count() >= 1);
}

#[test]
fn analyze_and_lowerbound() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.json");
    assert_eq!(sh(&["generate", "--family", "grid", "--n", "36", "--out", &g]).0, 0);
    let (code, out, _) = sh(&["analyze", "disjointness", "--in", &g]);
    assert_eq!(code, 0);
    assert!(out.contains("\"violations\": []"));
    // grids have removable 4-cycles, so the charge precondition fails
    assert_eq!(sh(&["analyze", "charge", "--in", &g]).0, 2);

    let (code, out, _) = sh(&[
        "lowerbound",
        "--family",
        "outerplanar3",
        "--k",
        "2",
        "--check",
        "forcing",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"holds\""));
    assert_eq!(
        sh(&["lowerbound", "--family", "planar4", "--k", "3", "--check", "distance"]).0,
        0
    );
    let (code, out, _) = sh(&[
        "lowerbound",
        "--family",
        "planar4",
        "--k",
        "3",
        "--check",
        "swap",
        "--t",
        "2",
        "--program",
        "id_modulo",
        "--seed",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"violation_found\": true"));
    assert_eq!(
        sh(&[
            "lowerbound",
            "--family",
            "planar4",
            "--k",
            "2",
            "--check",
            "swap",
            "--t",
            "2"
        ])
        .0,
        2
    );
}

#[test]
fn bench_csv_output() {
    let (code, out, _) = sh(&[
        "bench",
        "--families",
        "grid,hexgrid",
        "--sizes",
        "64",
        "--preset",
        "4col",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,n,rounds,colors,proper,worst_shrink");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("grid,64,"));
    assert_eq!(sh(&["bench", "--sizes", "256,64", "--preset", "4col"]).0, 2);
}

#[test]
fn seed_environment_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_planar-color");
    let gen = |name: &str, seed: &str, env: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args([
            "generate",
            "--family",
            "triangulation",
            "--n",
            "40",
            "--seed",
            seed,
            "--out",
        ]);
        cmd.arg(dir.path().join(name));
        cmd.env_remove("COLOR_SEED");
        if let Some(e) = env {
            cmd.env("COLOR_SEED", e);
        }
        assert!(cmd.stdout(std::process::Stdio::null()).status().unwrap().success());
        std::fs::read_to_string(dir.path().join(name)).unwrap()
    };
    let a = gen("a.txt", "7", None);
    let b = gen("b.txt", "1", Some("7"));
    let c = gen("c.txt", "1", None);
    assert_eq!(a, b);
    assert_ne!(a, c);
}
