use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use steiner_ramsey::fixtures;
use steiner_ramsey::format::system_to_json;
use steiner_ramsey::partite::fixtures as fh;
use steiner_ramsey::SteinerSystem;
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn system(&self, name: &str, s: &SteinerSystem) -> PathBuf {
        self.file(name, &system_to_json(s))
    }
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_steiner-ramsey"));
    cmd.args(args).env_remove("STEINER_RAMSEY_MAX_MEM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn arrows_k6_holds_and_k5_fails() {
    let sb = Sandbox::new();
    let k2 = sb.system("k2.json", &fixtures::complete_graph(2));
    let k3 = sb.system("k3.json", &fixtures::complete_graph(3));
    let k6 = sb.system("k6.json", &fixtures::complete_graph(6));
    let k5 = sb.system("k5.json", &fixtures::complete_graph(5));
    let args = |h: &PathBuf| {
        run(&[
            "verify", "arrows", "--host", p(h), "--target", p(&k3), "--pattern", p(&k2), "--c", "2",
        ])
    };
    let ok = args(&k6);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["verdict"], "holds");
    let bad = args(&k5);
    assert_eq!(code(&bad), 1);
    let rec = json(&bad);
    assert_eq!(rec["verdict"], "fails");
    assert_eq!(rec["coloring"].as_array().unwrap().len(), 10);
}

#[test]
fn predicates() {
    let sb = Sandbox::new();
    let fano = sb.system("fano.json", &fixtures::fano());
    let path = sb.system("p3.json", &fixtures::p3());
    assert_eq!(code(&run(&["check", "complete", "--in", p(&fano)])), 0);
    assert_eq!(code(&run(&["check", "complete", "--in", p(&path)])), 1);
    assert_eq!(code(&run(&["check", "homogeneous", "--in", p(&path)])), 1);
    let broken = sb.file(
        "broken.json",
        r#"{"format_version":1,"r":3,"t":2,"vertex_count":4,"edges":[[0,1,2],[0,1,3]]}"#,
    );
    let out = run(&["check", "steiner", "--in", p(&broken)]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["violation"], serde_json::json!([[0, 1, 2], [0, 1, 3]]));
    assert_eq!(code(&run(&["check", "steiner", "--in", p(&broken), "--t", "3"])), 0);
    let edge = sb.system("edge.json", &fixtures::edge(2));
    let strong = |map: &str| run(&["check", "strong", "--in", p(&edge), "--host", p(&path), "--map", map]);
    assert_eq!(code(&strong("0,1")), 0);
    let points = sb.system("points.json", &fixtures::discrete(3, 2, 2));
    let triple = sb.system("triple.json", &fixtures::edge(3));
    let check = |pred: &str| run(&["check", pred, "--in", p(&points), "--host", p(&triple), "--map", "0,1"]);
    assert_eq!(code(&check("induced")), 0);
    assert_eq!(code(&check("strong")), 1);
}

#[test]
fn status_and_copies() {
    let sb = Sandbox::new();
    let path = sb.system("p3.json", &fixtures::p3());
    let out = run(&["status", "--class", "S◀<", "--pattern", p(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["has_property"], true);
    let out = run(&["status", "--class", "S", "--pattern", p(&path)]);
    assert_eq!(json(&out)["has_property"], false);
    assert_eq!(code(&run(&["status", "--class", "T", "--pattern", p(&path)])), 3);

    let k2 = sb.system("k2.json", &fixtures::complete_graph(2));
    let k4 = sb.system("k4.json", &fixtures::complete_graph(4));
    let out = run(&["copies", "--pattern", p(&k2), "--host", p(&k4), "--jobs", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["count"], 6);
}

#[test]
fn hales_jewett_certificates() {
    let out = run(&["hj", "verify", "--q", "2", "--c", "2", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], true);
    let out = run(&["hj", "verify", "--q", "2", "--c", "2", "--n", "1"]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["counterexample"].is_array());
    let out = run(&["hj", "search", "--q", "2", "--c", "2", "--bound", "3"]);
    assert_eq!(json(&out)["n"], 2);
    let out = run(&["hj", "search", "--q", "3", "--c", "2", "--bound", "2"]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["n"].is_null());
}

#[test]
fn constructions() {
    let sb = Sandbox::new();
    let two = sb.file("two.json", &fh::two_edges(2, 2).to_json());
    let out = run(&["construct", "prelim", "--in", p(&two), "--c", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    assert_eq!(rec["mode"], "verified-arrow");
    assert_eq!(rec["property_ii"]["holds"], true);
    let single = sb.file("single.json", &fh::single(&fixtures::fano()).to_json());
    let out = run(&["construct", "clean", "--in", p(&single), "--c", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["copies"].as_array().unwrap().len(), 1);

    let fano = sb.system("fano.json", &fixtures::fano());
    let out = run(&[
        "construct", "theorem", "--pattern", p(&fano), "--target", p(&fano), "--c", "2", "--check",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    assert_eq!(rec["verified"], true);
    assert!(rec["arrow_check"]["failure"].is_null());
}

#[test]
fn infeasible_theorem_exits_two() {
    let sb = Sandbox::new();
    let vertex = sb.system("v.json", &fixtures::discrete(2, 2, 1));
    let path = sb.system("p3.json", &fixtures::p3());
    let out = run(&[
        "construct", "theorem", "--pattern", p(&vertex), "--target", p(&path), "--c", "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn negative_demos() {
    let sb = Sandbox::new();
    let two = sb.system("two.json", &fixtures::discrete(3, 2, 2));
    let out = run(&["negative", "demo", "--mode", "incomplete", "--pattern", p(&two)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["check"]["holds"], true);

    let path = sb.system("p3.json", &fixtures::p3());
    let out = run(&["negative", "demo", "--mode", "nonhomogeneous", "--pattern", p(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["k_copies_checked"], 1);

    let edge = sb.system("edge.json", &fixtures::edge(2));
    let out = run(&["negative", "demo", "--mode", "ordering", "--pattern", p(&edge)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["exhaustive"], true);
    let out = run(&["negative", "demo", "--mode", "incomplete", "--pattern", p(&edge)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn input_errors_exit_three() {
    let sb = Sandbox::new();
    let junk = sb.file("junk.json", "not json");
    assert_eq!(code(&run(&["check", "complete", "--in", p(&junk)])), 3);
    assert_eq!(code(&run(&["check", "complete", "--in", "/nonexistent/x.json"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
    let fano = sb.system("fano.json", &fixtures::fano());
    let out = run_env(
        &["check", "complete", "--in", p(&fano)],
        &[("STEINER_RAMSEY_MAX_MEM", "plenty")],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn memory_cap_limits_constructions() {
    let sb = Sandbox::new();
    let two = sb.file("two.json", &fh::two_edges(2, 2).to_json());
    let args = ["construct", "prelim", "--in", p(&two), "--c", "2"];
    assert_eq!(code(&run_env(&args, &[("STEINER_RAMSEY_MAX_MEM", "4K")])), 2);
    assert_eq!(code(&run_env(&args, &[("STEINER_RAMSEY_MAX_MEM", "1G")])), 0);
}

#[test]
fn output_is_stable_and_can_go_to_a_file() {
    let sb = Sandbox::new();
    let path = sb.system("p3.json", &fixtures::p3());
    let args = ["negative", "demo", "--mode", "ordering", "--pattern", p(&path), "--seed", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let target = sb.dir.path().join("out.json");
    let out = run(&[&args[..], &["--out", p(&target)]].concat());
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
}
