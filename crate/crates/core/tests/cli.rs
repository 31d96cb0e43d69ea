use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nmk(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmk")).env("NMK_CACHE_DIR", cache).args(args).output().expect("run nmk")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const K4: &str = "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const FIGURE: &str = "7\n0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n3 4\n3 5\n4 6\n5 6\n";
const K23: &str = "5 = 2 3\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n";

#[test]
fn homology_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.txt", K4);
    let out = nmk(dir.path(), &["homology", &g, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv, "dim,betti\n-1,0\n0,0\n1,0\n2,1\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero from dimension 3"));

    let out = nmk(dir.path(), &["homology", &g, "--k", "2", "--format", "json", "--field", "gf65521"]);
    let v = stdout_json(&out);
    assert_eq!(v["vanishing_bound"]["holds"], true);
    // The table was cached and a manifest written.
    let names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("manifest-")));
}

#[test]
fn figure_graph_homology() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "fig.txt", FIGURE);
    let v = stdout_json(&nmk(dir.path(), &["homology", &g, "--k", "3", "--format", "json"]));
    let betti: Vec<(i64, u64)> = v["betti"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["dim"].as_i64().unwrap(), e["betti"].as_u64().unwrap()))
        .filter(|&(_, b)| b > 0)
        .collect();
    assert_eq!(betti, vec![(4, 4), (5, 5)]);
}

#[test]
fn edgeless_graph_has_only_the_empty_face() {
    // No edges means the complex is {∅}: nothing in dimension 0 or above,
    // and the reduced convention puts a single class in dimension -1.
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "e.txt", "3\n");
    let out = nmk(dir.path(), &["homology", &g, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "dim,betti\n-1,1\n");
}

#[test]
fn leray_commands() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let out = nmk(dir.path(), &["leray", &k4, "--k", "2", "--d0", "2", "--near", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "PASS");

    let k23 = write(dir.path(), "k23.txt", K23);
    let out = nmk(dir.path(), &["leray", &k23, "--k", "2", "--d0", "1", "--near"]);
    assert_eq!(out.status.code(), Some(0));

    let fig = write(dir.path(), "fig.txt", FIGURE);
    let out = nmk(dir.path(), &["leray", &fig, "--k", "3", "--d0", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "FAIL");
    assert!(v["nonzero_dimensions"].as_array().unwrap().iter().any(|d| d.as_array().unwrap().contains(&Value::from(5))));

    let out = nmk(dir.path(), &["leray", &k4, "--k", "2", "--d0", "2", "--sample", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn morse_verify_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmk(dir.path(), &["morse-verify", "--family", r#"{"kind":"PM","vertices":[0,1,2,3],"h":[]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["matching"]["acyclic"], true);
    assert!(v["bound"]["bound"].as_str().unwrap().starts_with('<'));

    let spec = write(dir.path(), "fc.json", r#"{"kind":"FC","vertices":[0],"h":[]}"#);
    let v = stdout_json(&nmk(dir.path(), &["morse-verify", "--family", &spec]));
    assert_eq!(v["bound"]["max_critical_size"], 0);

    let out = nmk(dir.path(), &["morse-verify", "--family", r#"{"kind":"BFC","x":[0,1],"y":[2],"z":[0],"h":[]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "EMPTY_FAMILY");

    let out = nmk(dir.path(), &["morse-verify", "--family", r#"{"kind":"PM"}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rainbow_commands() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "c4.txt", "4\n0 1\n1 2\n2 3\n0 3\nSET 1: 0 1, 2 3\nSET 2: 1 2, 0 3\nSET 3: 0 1, 2 3\n");
    let out = nmk(dir.path(), &["rainbow", "verify", &inst, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "SATISFIED");
    assert_eq!(v["certificate"]["assignment"].as_array().unwrap().len(), 2);

    let out = nmk(dir.path(), &["rainbow", "tightness", "--k", "2", "--m", "2", "--host", "bipartite:2,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "WITNESS");
    assert!(v["instance"].as_str().unwrap().contains("SET 2"));

    let pair = write(dir.path(), "pair.txt", "4\n0 1\n1 2\n2 3\n0 3\nSET 1: 0 1, 2 3\nSET 2: 1 2, 0 3\n");
    let out = nmk(dir.path(), &["rainbow", "verify", &pair, "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "HYPOTHESIS_FAILED");

    let bad = write(dir.path(), "bad.txt", "4\n0 1\nSET one: 0 1\n");
    let out = nmk(dir.path(), &["rainbow", "verify", &bad, "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = nmk(dir.path(), &["rainbow", "tightness", "--k", "2", "--m", "2", "--host", "torus:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmk(dir.path(), &["sweep", "leray-k2", "--jobs", "2", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("passed  3"));

    let again = nmk(dir.path(), &["sweep", "leray-k2", "--seed", "9"]);
    let digest = |t: &str| t.lines().find(|l| l.starts_with("digest")).map(str::to_string);
    assert_eq!(digest(&table), digest(&String::from_utf8(again.stdout).unwrap()));

    let out = nmk(dir.path(), &["sweep", "morse-bounds", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["failures"], Value::Array(vec![]));

    let out = nmk(dir.path(), &["sweep", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("figure-1") && err.contains("combinators"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nmk(dir.path(), &["homology"]).status.code(), Some(2));
    assert_eq!(nmk(dir.path(), &["homology", "/no/such/file", "--k", "2"]).status.code(), Some(2));
    let g = write(dir.path(), "k4.txt", K4);
    assert_eq!(nmk(dir.path(), &["homology", &g, "--k", "2", "--field", "gf4"]).status.code(), Some(2));
}
