use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use xclab::formats::{read_json, CountFile, DiscretizedFile, ExtensionFile, PolytopeFile, VertexSetFile};
use xclab_core::discretizer::discretize;
use xclab_core::polytope::{hull, VertexSet};

fn xclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xclab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE: &str = r#"{"n": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}"#;

#[test]
fn roundtrip_three() {
    let out = xclab(&["roundtrip", "--n", "3", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("255/255 reconstructed"));
}

#[test]
fn bound_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let out = xclab(&["bound", "--n", "1", "--out", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let report: CountFile = read_json(&path).unwrap();
    assert_eq!(report.r_star, "1");
    assert!(report.bracket_holds && report.trivial);
    assert!(String::from_utf8_lossy(&out.stderr).contains("certified"));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n": 2, "vertices": [[0, 2]]}"#);
    assert_eq!(xclab(&["hull", s(&bad)]).status.code(), Some(1));
    let garbage = write(dir.path(), "garbage.json", "not json");
    assert_eq!(xclab(&["hull", s(&garbage)]).status.code(), Some(1));
    assert_eq!(xclab(&["hull", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(xclab(&["approx", "--n", "1", "--eps", "0"]).status.code(), Some(1));
    assert_eq!(xclab(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn file_pipeline_matches_memory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = write(d, "v.json", TRIANGLE);
    let x = VertexSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();

    let p = d.join("p.json");
    assert!(xclab(&["hull", s(&v), "--out", s(&p)]).status.success());
    assert_eq!(read_json::<PolytopeFile>(&p).unwrap().to_polytope().unwrap(), hull(&x).unwrap());

    let f = d.join("f.json");
    assert!(xclab(&["factorize", s(&v), "--polytope", s(&p), "--side", "right", "--out", s(&f)]).status.success());
    let e = d.join("e.json");
    assert!(xclab(&["extend", s(&v), "--factorization", s(&f), "--out", s(&e)]).status.success());
    let report = d.join("report.json");
    let out = xclab(&["verify-extension", s(&e), "--vertices", s(&v), "--out", s(&report)]);
    assert_eq!(out.status.code(), Some(0));

    let sys = d.join("d.json");
    assert!(xclab(&["discretize", s(&v), "--out", s(&sys)]).status.success());
    let from_file = read_json::<DiscretizedFile>(&sys).unwrap().to_system().unwrap();
    assert_eq!(from_file, discretize(&x, None).unwrap());
    let back = d.join("back.json");
    assert!(xclab(&["reconstruct", s(&sys), "--out", s(&back)]).status.success());
    assert_eq!(read_json::<VertexSetFile>(&back).unwrap().to_set().unwrap(), x);
}

#[test]
fn broken_certificate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = write(d, "v.json", TRIANGLE);
    let e = d.join("e.json");
    assert!(xclab(&["extend", s(&v), "--out", s(&e)]).status.success());
    let mut ef: ExtensionFile = read_json(&e).unwrap();
    ef.v[0][1] = "1".into();
    fs::write(&e, serde_json::to_string(&ef).unwrap()).unwrap();
    let out = xclab(&["verify-extension", s(&e), "--vertices", s(&v)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex 1"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let v = write(dir.path(), "v.json", TRIANGLE);
    let args = ["approx", "--vertices", s(&v), "--eps", "1/2", "--seed", "9"];
    let a = xclab(&args);
    let b = xclab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn matroid_pipes_into_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = d.join("k3.json");
    let p = d.join("k3p.json");
    let out = xclab(&["matroid", "--family", "graphic", "--n", "3", "--edges", "1-2,2-3,1-3", "--out", s(&v), "--polytope", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json::<VertexSetFile>(&v).unwrap().vertices.len(), 7);
    assert_eq!(read_json::<PolytopeFile>(&p).unwrap().a.len(), 7);
    assert!(xclab(&["slack", s(&v), "--polytope", s(&p)]).status.success());
    assert!(xclab(&["discretize", s(&v)]).status.success());

    let m = write(d, "m.json", r#"{"n": 3, "independent": [[], [1], [2], [3], [1, 2]]}"#);
    let out = xclab(&["matroid", "--family", "file", "--input", s(&m)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("axiom II"));
}
