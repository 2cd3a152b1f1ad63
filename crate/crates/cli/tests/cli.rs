use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-ham"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn generate(dir: &Path, name: &str, t: &str, r: usize, s: usize, k: usize) -> PathBuf {
    let p = dir.join(name);
    let o = run(&[
        "generate",
        "--type",
        t,
        "--r",
        &r.to_string(),
        "--s",
        &s.to_string(),
        "--k",
        &k.to_string(),
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn generate_then_export_json_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.6.3.6", 8, 2, 6);
    let o = run(&["export", "--map", map.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), fs::read_to_string(&map).unwrap());
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.json", "3.3.3.3.6", 9, 6, 2);
    let b = generate(dir.path(), "b.json", "3.3.3.3.6", 9, 6, 2);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn construct_then_dot_highlights_24_edges() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.6.3.6", 8, 2, 6);
    let cert = dir.path().join("c.json");
    let o = run(&["construct", "--map", map.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["cycle"].as_array().unwrap().len(), 24);
    assert_eq!(v["contractible"], true);
    let o = run(&[
        "export",
        "--map",
        map.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
        "--format",
        "dot",
    ]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert_eq!(dot.matches("color=red").count(), 24);
    assert_eq!(dot.matches(" -- ").count(), 48);
}

#[test]
fn map_only_dot_is_well_formed() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "4.8.8", 8, 3, 2);
    let o = run(&["export", "--map", map.to_str().unwrap(), "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph torus {\n"));
    assert!(dot.ends_with("}\n"));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    assert!(!dot.contains("color=red"));
    // Every statement line ends with a semicolon.
    for line in dot.lines().skip(1).filter(|l| *l != "}") {
        assert!(line.ends_with(';'), "{line}");
    }
}

#[test]
fn construct_refuses_dodecagonal_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.12.12", 24, 2, 9);
    let o = run(&["construct", "--map", map.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("3.12.12"));
}

#[test]
fn trace_reports_vertices_and_homology() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.3.3.4.4", 6, 4, 2);
    let o = run(&["trace", "--map", map.to_str().unwrap(), "--kind", "A1", "--edge", "0,1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["homology"], serde_json::json!([1, 0]));
}

#[test]
fn trace_with_wrong_kind_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.3.3.4.4", 6, 4, 2);
    let o = run(&["trace", "--map", map.to_str().unwrap(), "--kind", "Z1", "--edge", "0,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_reports_nodes_and_time() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.6.3.6", 8, 2, 6);
    let o = run(&["oracle", "--map", map.to_str().unwrap(), "--connectivity", "--max-nodes", "100000"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "hamiltonian");
    assert!(v["nodes_explored"].as_u64().unwrap() > 0);
    assert!(v["elapsed_ms"].is_u64());
    assert_eq!(v["connectivity"], 4);
}

#[test]
fn tiny_node_budget_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let map = generate(dir.path(), "m.json", "3.12.12", 24, 2, 9);
    let o = run(&["oracle", "--map", map.to_str().unwrap(), "--max-nodes", "10"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "inconclusive");
}

#[test]
fn empty_manifest_passes_with_empty_report() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("empty.toml");
    fs::write(&m, "").unwrap();
    let out = dir.path().join("out");
    let o = run(&["suite", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0 passed, 0 failed\n");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn expecting_a_hamiltonian_dodecagonal_map_fails() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.toml");
    fs::write(
        &m,
        "[[entry]]\ntype = \"3.12.12\"\nr = 24\ns = 2\nk = 9\nexpected = \"hamiltonian\"\n",
    )
    .unwrap();
    let o = run(&["suite", m.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.starts_with("FAIL 3.12.12 T(24,2,9)"), "{text}");
    assert!(text.contains("no construction"));
}

#[test]
fn malformed_manifest_exits_2() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("bad.toml");
    fs::write(&m, "[[entry]]\ntype = 3\n").unwrap();
    assert_eq!(code(&run(&["suite", m.to_str().unwrap()])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["generate", "--type", "3.6.3.6"])), 2);
    assert_eq!(code(&run(&["generate", "--type", "3.6.3.6", "--r", "7", "--s", "2", "--k", "0"])), 2);
}

#[test]
fn reference_suite_reports_the_dodecagonal_entry_as_the_only_failure() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = run(&["suite", "--out", a.to_str().unwrap()]);
    run(&["suite", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{text}");
    assert!(fails[0].starts_with("FAIL 3.12.12 T(24,2,9)"));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    // Reports carry no timings, so reruns are byte-identical.
    assert_eq!(fs::read(a.join("report.json")).unwrap(), fs::read(b.join("report.json")).unwrap());
}
