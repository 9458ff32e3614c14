//! Acceptance suite: one test per cross-check criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them). Parameters here are
//! pinned; the same checks are reachable through `qchar verify`.

use std::time::Instant;

use qchar_core::verify::{self, CheckOutcome};

fn report(criterion: &str, started: Instant, outcome: &CheckOutcome) {
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!(
        "[{criterion}] {status} {} ({:.2?}): {}",
        outcome.name,
        started.elapsed(),
        outcome.detail
    );
    assert!(outcome.passed, "{}: {}", outcome.name, outcome.detail);
}

#[test]
fn criterion_1_goettsche_vs_partition_oracle() {
    let t = Instant::now();
    let outcome = verify::check_goettsche_partition_oracle(12);
    report("criterion 1", t, &outcome);
}

#[test]
fn criterion_2_orbifold_euler_identity() {
    let t = Instant::now();
    let outcome = verify::check_hirzebruch_hofer(6, &[1, 2, 3, 4]);
    report("criterion 2", t, &outcome);
}

#[test]
fn criterion_3_operator_relations_exhaustive() {
    let t = Instant::now();
    let outcome = verify::check_fock_relations([1, 2, 1, 2, 1], 6, 4);
    report("criterion 3", t, &outcome);
}

#[test]
fn criterion_4_character_equals_product_series() {
    let t = Instant::now();
    let outcome = verify::check_fock_character(
        &[
            [1, 0, 0, 0, 0],
            [1, 0, 1, 0, 1],
            [0, 1, 0, 1, 0],
            [1, 2, 1, 2, 1],
            [2, 1, 3, 1, 2],
        ],
        8,
    );
    report("criterion 4", t, &outcome);
}

#[test]
fn criterion_5_mckay_correspondence_all_families() {
    let t = Instant::now();
    let outcome = verify::check_mckay_families(8, 6, true);
    report("criterion 5", t, &outcome);
}

#[test]
fn criterion_6_dual_algorithm_affine_characters() {
    let t = Instant::now();
    let outcome = verify::check_affine_dual_algorithms(6);
    report("criterion 6", t, &outcome);
}

#[test]
fn criterion_7_level_formula() {
    let t = Instant::now();
    let outcome = verify::check_level_formula(0x5EED);
    report("criterion 7", t, &outcome);
}

#[test]
fn criterion_8_hecke_suite() {
    let t = Instant::now();
    let outcome = verify::check_hecke_suite();
    report("criterion 8", t, &outcome);
}

#[test]
fn criterion_9_eta_modularity() {
    let t = Instant::now();
    let outcome = verify::check_eta_modularity(1e-8);
    report("criterion 9", t, &outcome);
}
