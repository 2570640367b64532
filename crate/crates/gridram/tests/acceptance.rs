//! End-to-end reproduction suite. Each test prints one pass/fail line so
//! the whole table is visible with `--nocapture`.

use gridram::acceptance::{Outcome, CRITERIA};

fn check(index: usize) {
    let (name, f) = CRITERIA[index - 1];
    let outcome: Outcome = f();
    match &outcome {
        Ok(msg) => println!("criterion {index}: pass — {name}: {msg}"),
        Err(msg) => println!("criterion {index}: FAIL — {name}: {msg}"),
    }
    assert!(outcome.is_ok(), "criterion {index} ({name}) failed: {outcome:?}");
}

#[test]
fn criterion_01_exact_values() {
    check(1);
}

#[test]
fn criterion_02_scripts() {
    check(2);
}

#[test]
fn criterion_03_constructibility() {
    check(3);
}

#[test]
fn criterion_04_product_lower_bound() {
    check(4);
}

#[test]
fn criterion_05_supersaturation() {
    check(5);
}

#[test]
fn criterion_06_hypergraph_correspondence() {
    check(6);
}

#[test]
fn criterion_07_cnf_soundness() {
    check(7);
}

#[test]
fn criterion_08_certificate_soundness() {
    check(8);
}

#[test]
fn criterion_09_diversity_oracle() {
    check(9);
}

#[test]
fn criterion_10_uniform_subgrid() {
    check(10);
}
