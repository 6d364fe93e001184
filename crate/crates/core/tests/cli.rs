use std::process::Command;

use kscheck_core::catalog::{load_set, new33, serialize};
use kscheck_core::cli::{exit, run_args};

fn run(args: &[&str]) -> (String, i32) {
    run_args(std::iter::once("kscheck").chain(args.iter().copied()))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kscheck"))
}

#[test]
fn game_reports_published_values() {
    let (out, code) = run(&["--expect-paper", "game", "new33"]);
    assert_eq!(code, exit::OK, "{out}");
    assert!(out.contains("W_C = 44/45"));
    assert!(out.contains("W_Q = 1\n"));
    assert!(out.contains("winning events: 333"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_yuoh13_prints_a_valid_assignment() {
    let (out, code) = run(&["--expect-paper", "verify", "yuoh13"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("verdict: SAT"));
    assert!(out.contains("assignment (rays valued 1):"));
}

#[test]
fn table1_row() {
    let (out, code) = run(&["--expect-paper", "table1"]);
    assert_eq!(code, exit::OK, "{out}");
    assert!(out.contains("new33: 33 rays, 14 bases, 3 orbits, 144 automorphisms, KS-uncolorable, 5-9"));
}

#[test]
fn reports_are_deterministic() {
    for args in [&["symmetry", "new33"][..], &["game", "new33"], &["minimal", "new33"], &["bases", "new33"]] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn mismatch_gives_exit_code_one() {
    // a file that calls itself new33 but holds the 13 Yu-Oh rays
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fake.json");
    let mut file = serialize(&kscheck_core::catalog::yuoh13(), "");
    file.name = "new33".into();
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let (out, code) = run(&["--expect-paper", "bases", path.to_str().unwrap()]);
    assert_eq!(code, exit::MISMATCH, "{out}");
    assert!(out.contains("expect complete bases: FAIL (expected 14, got 4)"));
    // without --expect-paper the same run succeeds
    assert_eq!(run(&["bases", path.to_str().unwrap()]).1, exit::OK);
}

#[test]
fn game_with_explicit_split() {
    let (out, code) = run(&["game", "new33", "--alice", "0,1", "--bob", "2,3,4"]);
    assert_eq!(code, exit::OK, "{out}");
    assert!(out.contains("contexts: 6"));
    let (_, code) = run(&["game", "new33", "--alice", "0", "--bob", "99"]);
    assert_eq!(code, exit::USAGE);
    let (_, code) = run(&["game", "yuoh13"]);
    assert_eq!(code, exit::USAGE);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "nonexistent-set"]).1, exit::UNKNOWN_SET);
    assert_eq!(run(&["frobnicate"]).1, exit::USAGE);
    assert_eq!(run(&["sic", "--seed", "(1,1"]).1, exit::USAGE);
    assert_eq!(run(&["majorana", "new33", "--out", "/nonexistent-dir/x.csv"]).1, exit::IO);
    assert_eq!(run(&["--help"]).1, exit::OK);
}

#[test]
fn missing_data_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().env("KSCHECK_DATA_DIR", dir.path()).args(["verify", "peres33"]).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::UNKNOWN_SET));
    assert!(String::from_utf8_lossy(&out.stderr).contains("peres33"));
    // table1 skips absent sets rather than failing
    let out = bin().env("KSCHECK_DATA_DIR", dir.path()).args(["--expect-paper", "table1", "--no-minimal"]).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::OK));
    assert!(String::from_utf8_lossy(&out.stdout).contains("peres33: skipped"));
}

#[test]
fn binary_streams() {
    let out = bin().args(["--expect-paper", "symmetry", "new33"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("automorphism group order: 144"));
    let out = bin().args(["verify", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::UNKNOWN_SET));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn timeout_exit_code() {
    let (out, code) = run(&["minimal", "new33", "--budget-secs", "0"]);
    // a zero budget either finishes instantly or reports an incomplete search
    if out.contains("search complete: false") {
        assert_eq!(code, exit::TIMEOUT);
    } else {
        assert_eq!(code, exit::OK);
    }
}

#[test]
fn exports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let (_, code) = run(&["majorana", "new33", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), "ray_index,ray,point,x,y,z");
    assert_eq!(lines.count(), 66);

    let graph = dir.path().join("excl.dimacs");
    let (out, code) = run(&["game", "new33", "--export", graph.to_str().unwrap()]);
    assert_eq!(code, exit::OK, "{out}");
    let dimacs = std::fs::read_to_string(&graph).unwrap();
    assert!(dimacs.starts_with("p edge 333 "));
    let legend = std::fs::read_to_string(dir.path().join("excl.dimacs.legend")).unwrap();
    assert_eq!(legend.lines().filter(|l| !l.starts_with('c')).count(), 333);

    let cnf = dir.path().join("new33.cnf");
    let (_, code) = run(&["verify", "new33", "--cnf", cnf.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    assert!(std::fs::read_to_string(&cnf).unwrap().contains("p cnf 33 "));

    let json = dir.path().join("new33.json");
    let (_, code) = run(&["export", "new33", "--out", json.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let loaded = load_set(&json).unwrap();
    assert!(loaded.violations.is_empty());
    let back = loaded.into_validated().unwrap();
    assert_eq!(back.rays(), new33().rays());
    assert_eq!(serialize(&back, "").rays, serialize(&new33(), "").rays);
    let (out, code) = run(&["--expect-paper", "symmetry", json.to_str().unwrap()]);
    assert_eq!(code, exit::OK, "{out}");
    assert!(out.contains("automorphism group order: 144"));
}
