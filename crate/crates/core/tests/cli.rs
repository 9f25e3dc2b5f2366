use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_heegraph");

const TRI: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/s3_2tet.tri");
const LINK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/s3_vertex_link.surf");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("HEEGRAPH_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_vertex_link() {
    let o = run(&["validate", TRI, LINK]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("1 vertices, 3 edges, 4 faces"), "{out}");
    assert!(
        out.contains("crudely_normal, weight 6, χ 2, genus 0"),
        "{out}"
    );
}

#[test]
fn validate_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_tri = dir.path().join("bad.tri");
    std::fs::write(&bad_tri, "tet 0: 0/1023 0/10x3 1/0132 1/2310\n").unwrap();
    let o = run(&["validate", s(&bad_tri)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let link = std::fs::read_to_string(LINK).unwrap();
    let bad_surf = dir.path().join("bad.surf");
    std::fs::write(
        &bad_surf,
        link.replace("surface 3 4 2", "surface 4 4 2")
            .replace("edges 2 2 2", "edges 2 2 2 0"),
    )
    .unwrap();
    let o = run(&["validate", TRI, s(&bad_surf)]);
    assert_eq!(o.status.code(), Some(3));

    let garbled = dir.path().join("garbled.surf");
    std::fs::write(&garbled, "surface three\n").unwrap();
    let o = run(&["validate", TRI, s(&garbled)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_examples() {
    let base = [
        "bounds",
        "--injectivity-radius",
        "8",
        "--compression-diameter-floor",
        "2",
        "--k",
        "2",
        "--json",
    ];
    let value = |extra: &[&str]| -> serde_json::Value {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let v = value(&["--genus", "2", "--sweepout-max-area", "1"]);
    assert!((v["C"].as_f64().unwrap() - 4.0 * std::f64::consts::PI * 1.01).abs() < 1e-9);
    assert!((v["delta"].as_f64().unwrap() - 0.99).abs() < 1e-12);
    assert_eq!(v["W"], 27);
    let v = value(&["--genus", "1", "--sweepout-max-area", "5"]);
    assert!((v["C"].as_f64().unwrap() - 5.05).abs() < 1e-9);
    let v = value(&["--genus", "3", "--sweepout-max-area", "1"]);
    assert!((v["C"].as_f64().unwrap() - 8.0 * std::f64::consts::PI * 1.01).abs() < 1e-9);

    let o = run(&[
        "bounds",
        "--genus",
        "2",
        "--sweepout-max-area",
        "1",
        "--k",
        "1",
        "--injectivity-radius",
        "8",
        "--compression-diameter-floor",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bounds.toml");
    std::fs::write(
        &cfg,
        "genus = 2\nsweepout_max_area = 1.0\nK = 2.0\ninjectivity_radius = 8.0\ncompression_diameter_floor = 2.0\n",
    )
    .unwrap();
    let o = run(&["bounds", "--config", s(&cfg)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("W = 27"));
}

fn graph(dir: &Path, name: &str, extra: &[&str]) -> (Output, PathBuf, PathBuf) {
    let json = dir.join(format!("{name}.json"));
    let manifest = dir.join(format!("{name}.manifest.json"));
    let mut args = vec![
        "graph",
        TRI,
        LINK,
        "--out-json",
        s(&json),
        "--manifest",
        s(&manifest),
    ];
    args.extend_from_slice(extra);
    let o = run(&args);
    (o, json, manifest)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn empty_move_set_gives_one_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out, _) = graph(dir.path(), "g", &["--budget", "12", "--moves", ""]);
    assert!(o.status.success());
    let doc = json(&out);
    assert_eq!(doc["rank"], 0);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(doc["status"], "complete");
}

#[test]
fn repeated_runs_have_equal_digests() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--budget", "8", "--moves", "E1,F2'"];
    let (a, _, ma) = graph(dir.path(), "a", &args);
    let (b, _, mb) = graph(dir.path(), "b", &[&args[..], &["--workers", "3"]].concat());
    assert!(a.status.success() && b.status.success());
    let (ma, mb) = (json(&ma), json(&mb));
    assert_eq!(ma["result"]["digests"], mb["result"]["digests"]);
    assert_eq!(ma["parameters"]["workers"], 1);
    assert_eq!(mb["parameters"]["workers"], 3);
    assert_eq!(ma["tool"], "heegraph");
}

#[test]
fn workers_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    let o = Command::new(BIN)
        .args(["graph", TRI, LINK])
        .args(["--budget", "8", "--moves", "E1", "--manifest", s(&manifest)])
        .env("HEEGRAPH_WORKERS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(json(&manifest)["parameters"]["workers"], 2);
}

#[test]
fn budget_from_bounds_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bounds.toml");
    // K (C + 1) with C = 5.05 and K = 1.2 gives W = 7
    std::fs::write(
        &cfg,
        "genus = 1\nsweepout_max_area = 5.0\nK = 1.2\ninjectivity_radius = 8.0\ncompression_diameter_floor = 2.0\n",
    )
    .unwrap();
    let (o, out, manifest) = graph(dir.path(), "g", &["--bounds", s(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&out)["budget"], 7);
    assert_eq!(json(&manifest)["parameters"]["budget"], 7);
}

#[test]
fn limits_mark_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out, manifest) = graph(
        dir.path(),
        "g",
        &["--budget", "8", "--moves", "E1", "--max-vertices", "3"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("PARTIAL"));
    assert_eq!(json(&out)["status"], "partial");
    assert_eq!(json(&manifest)["result"]["status"], "partial");
}

#[test]
fn seed_over_budget_is_semantic_error() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _, _) = graph(dir.path(), "g", &["--budget", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn generators_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let loops = dir.path().join("loops.txt");
    let dot = dir.path().join("g.dot");
    let o = run(&[
        "generators",
        TRI,
        LINK,
        "--budget",
        "8",
        "--moves",
        "E1,F2'",
        "--loops",
        s(&loops),
        "--out-dot",
        s(&dot),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&loops).unwrap();
    assert_eq!(text.lines().count(), 37);
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(
        dot.lines().filter(|l| l.contains("[label=\"w")).count(),
        130
    );

    let replay = |path: &Path| run(&["replay", TRI, LINK, s(path)]);
    let o = replay(&loops);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches(": ok").count(), 37);

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert!(replay(&empty).status.success());

    let first = text.lines().next().unwrap();
    let mut moves: Vec<&str> = first
        .split_once(':')
        .unwrap()
        .1
        .split_whitespace()
        .collect();
    moves.pop();
    let cut = dir.path().join("cut.txt");
    std::fs::write(&cut, moves.join(" ")).unwrap();
    let o = replay(&cut);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn oracle_is_hidden() {
    let o = run(&["--help"]);
    let help = stdout(&o);
    for cmd in ["validate", "bounds", "graph", "generators", "replay"] {
        assert!(help.contains(cmd), "{cmd}");
    }
    assert!(!help.contains("oracle"));
    let o = run(&["oracle", "matchings", "2", "2", "2"]);
    assert_eq!(stdout(&o).trim(), "5");
}
