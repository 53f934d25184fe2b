use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const NOW: &str = "2024-03-01T12:00:00Z";

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn influence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_influence"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn json(output: &Output) -> Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn metrics_for_worked_example() {
    let fixture = fixtures().join("youtube.json");
    let out = json(&influence(&["metrics", "--fixture", fixture.to_str().unwrap(), "--now", NOW]));
    assert_eq!(out["screen_name"], "youtube");
    let metric = out["quality"]["influence_metric"].as_f64().unwrap();
    assert!((metric - 6.473).abs() < 5e-4, "{metric}");
}

#[test]
fn ingest_then_query_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.nt");
    let log = dir.path().join("metrics.csv");
    let fixtures = fixtures();
    let ingest = [
        "ingest",
        "--fixtures",
        fixtures.to_str().unwrap(),
        "--graph",
        graph.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
        "--now",
        NOW,
    ];
    let report = json(&influence(&ingest));
    assert_eq!(report["accounts_processed"], 5);
    assert_eq!(report["accounts_failed"], 0);
    let first = std::fs::read(&graph).unwrap();

    let query = fixtures.join("queries/mentioned_and_replied.rq");
    let results = json(&influence(&["query", "--graph", graph.to_str().unwrap(), "--query", query.to_str().unwrap()]));
    let names: Vec<&str> = results["results"]["bindings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["accountName"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["dave", "bob"]);

    json(&influence(&ingest));
    assert_eq!(std::fs::read(&graph).unwrap(), first);
    let rows = std::fs::read_to_string(&log).unwrap().lines().count();
    assert_eq!(rows, 1 + 10);
}

#[test]
fn export_ontology_formats() {
    let turtle = influence(&["export-ontology"]);
    assert!(turtle.status.success());
    let text = String::from_utf8(turtle.stdout).unwrap();
    assert!(text.contains("@prefix"));
    assert!(text.contains("owl:Class"));

    let nt = influence(&["export-ontology", "--format", "ntriples"]);
    assert!(nt.status.success());
    let text = String::from_utf8(nt.stdout).unwrap();
    assert!(text.lines().all(|l| l.ends_with(" .")));
}

#[test]
fn rank_compare_fixture_and_identity() {
    let rankings = fixtures().join("rankings");
    let a = rankings.join("influencetracker.csv");
    let b = rankings.join("followerwonk.csv");
    let out = influence(&["rank-compare", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("\"slope\": 0.700"), "{text}");
    assert!(text.contains("\"mean_abs_diff\": 0.800"), "{text}");
    json(&out);

    let out = influence(&["rank-compare", "--a", a.to_str().unwrap(), "--b", a.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"slope\": 1.000"), "{text}");
    assert!(text.contains("\"mean_abs_diff\": 0.000"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(influence(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(influence(&["metrics"]).status.code(), Some(1));
    assert_eq!(influence(&["--help"]).status.code(), Some(0));
    let missing = influence(&["metrics", "--fixture", "/nonexistent/x.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let query = dir.path().join("bad.rq");
    std::fs::write(&query, "SELECT WHERE {").unwrap();
    let graph = dir.path().join("g.nt");
    std::fs::write(&graph, "").unwrap();
    let bad = influence(&["query", "--graph", graph.to_str().unwrap(), "--query", query.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}
