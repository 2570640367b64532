//! Smoke tests for the command-line interface, driven through the built
//! binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gridram(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridram"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn pattern_emits_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridram(&["pattern", "ac:8", "--out", "ac8.json"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("ac8.json")).unwrap();
    let g: gridram::grid::GridSubgraph = serde_json::from_str(&text).unwrap();
    assert_eq!((g.columns, g.rows), (4, 4));
    assert_eq!(g.edge_count(), 8);
}

#[test]
fn ramsey_exact_reports_value_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "row-clique:2", "--out", "edge.json"], dir.path())
        .status
        .success());
    let out = gridram(
        &["ramsey", "exact", "edge.json", "--k", "2", "--nmax", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("gr = 2"), "{text}");
    assert!(text.contains("witness N=1"), "{text}");
}

#[test]
fn embed_and_coclique_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "ac:6", "--out", "ac6.json"], dir.path())
        .status
        .success());
    assert!(gridram(
        &["bridge", "script", "ac:6", "--replay", "--out", "script.json"],
        dir.path()
    )
    .status
    .success());

    // with --out, stdout carries only the replayed grid
    let replayed = gridram(
        &["bridge", "script", "ac:6", "--replay", "--out", "script.json"],
        dir.path(),
    );
    assert!(replayed.status.success());
    fs::write(dir.path().join("host.json"), stdout(&replayed)).unwrap();
    let count = gridram(&["embed", "count", "ac6.json", "host.json"], dir.path());
    assert!(count.status.success());
    let n: u64 = stdout(&count).trim().parse().unwrap();
    assert!(n > 0);

    let coc = gridram(&["coclique", "host.json", "--k", "2"], dir.path());
    assert!(coc.status.success());
}

#[test]
fn cnf_export_and_decode() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "row-clique:2", "--out", "edge.json"], dir.path())
        .status
        .success());
    let out = gridram(
        &["ramsey", "cnf", "edge.json", "--k", "2", "--n", "1", "--out", "f.cnf"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("f.cnf")).unwrap();
    assert!(text.contains("p cnf 0 0"), "{text}");

    // N=2 formula has variables and clauses
    assert!(gridram(
        &["ramsey", "cnf", "edge.json", "--k", "2", "--n", "2", "--out", "g.cnf"],
        dir.path()
    )
    .status
    .success());
    let text = fs::read_to_string(dir.path().join("g.cnf")).unwrap();
    assert!(text.contains("p cnf 4 6"), "{text}");
    assert!(text.contains("c var 1 = h 1 2 1"), "{text}");

    // decode the empty model against the trivial formula
    fs::write(dir.path().join("model.txt"), "s SATISFIABLE\nv 0\n").unwrap();
    let out = gridram(&["ramsey", "decode", "f.cnf", "model.txt"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn lower_bound_from_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c5.edgelist"), "1 2\n2 3\n3 4\n4 5\n1 5\n").unwrap();
    let out = gridram(
        &["ramsey", "lower", "--col-graph", "c5.edgelist", "--k", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("gr(AC_6, K_3) >= 6"));
}

#[test]
fn hyper_tight_to_grid() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["hyper", "tight", "6", "--out", "c6.json"], dir.path())
        .status
        .success());
    let out = gridram(&["hyper", "fg", "c6.json", "--out", "grid.json"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("grid.json")).unwrap();
    let g: gridram::grid::GridSubgraph = serde_json::from_str(&text).unwrap();
    assert_eq!(g.edge_count(), 6);
}

#[test]
fn meh_color_and_avoid() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "square", "--out", "sq.json"], dir.path())
        .status
        .success());
    let out = gridram(&["meh", "color", "sq.json"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("1 2:"));

    let out = gridram(&["meh", "avoid", "sq.json", "--color", "1"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("exact: true"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridram(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verification_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "ac:6", "--out", "ac6.json"], dir.path())
        .status
        .success());
    assert!(gridram(&["pattern", "square", "--out", "sq.json"], dir.path())
        .status
        .success());
    // the square does not embed into the six-cycle
    let out = gridram(&["embed", "find", "sq.json", "ac6.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_determinism() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gridram(&["pattern", "as:3", "--out", "as3.json"], dir.path())
        .status
        .success());
    let a = gridram(&["--seed", "7", "pattern", "as:3"], dir.path());
    let b = gridram(&["--seed", "7", "pattern", "as:3"], dir.path());
    assert_eq!(stdout(&a), stdout(&b));
}
