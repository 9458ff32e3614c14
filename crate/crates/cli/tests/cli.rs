//! End-to-end tests driving the built binary.

use std::process::{Command, Output};

fn qchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchar"))
        .args(args)
        .env_remove("QCHAR_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn euler_series_coefficient_is_partition_count() {
    let out = qchar(&[
        "goettsche",
        "--betti",
        "1,0,0,0,0",
        "--order",
        "6",
        "--euler",
        "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["q_order"], 6);
    let terms = v["series"]["terms"].as_array().unwrap();
    let q6 = terms
        .iter()
        .find(|t| t["q"] == 6)
        .expect("q^6 term present");
    assert_eq!(q6["c"], "11");
}

#[test]
fn goettsche_json_round_trips_into_the_library_type() {
    let out = qchar(&[
        "goettsche",
        "--betti",
        "1,0,1,0,1",
        "--order",
        "5",
        "--json",
    ]);
    let v = stdout_json(&out);
    let series: qchar_core::series::BiSeries =
        serde_json::from_value(v["series"].clone()).expect("round trip");
    let direct = qchar_core::goettsche::goettsche_series(
        &qchar_core::goettsche::SurfaceTopology::new([1, 0, 1, 0, 1]),
        5,
    );
    assert_eq!(series, direct);
}

#[test]
fn orbifold_value() {
    let out = qchar(&["orbifold", "--n", "4", "--euler-number", "2", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["orbifold_euler"], "20");
}

#[test]
fn affine_both_algorithms_agree() {
    let out = qchar(&[
        "affine", "--type", "A1", "--weight", "1,0", "--depth", "4", "--algo", "both", "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["match"], "equal");
    assert_eq!(v["level"], 1);
    // basic-representation depth multiplicities are the partition numbers
    let entries = v["freudenthal"]["entries"].as_array().unwrap();
    let at = |c: &[u64]| {
        entries
            .iter()
            .find(|e| {
                e["descent"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_u64().unwrap())
                    .collect::<Vec<_>>()
                    == c
            })
            .map(|e| e["multiplicity"].as_str().unwrap().to_string())
    };
    assert_eq!(at(&[4, 4]).as_deref(), Some("5"));
}

#[test]
fn mckay_json_shape() {
    let out = qchar(&["mckay", "--group", "binary-tetrahedral", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["order"], 24);
    assert_eq!(v["matched_type"], "E6");
    assert_eq!(v["dims_match_marks"], true);
    let adjacency = v["adjacency"].as_array().unwrap();
    assert_eq!(adjacency.len(), 7);
}

#[test]
fn hecke_delta_eigen_data() {
    let out = qchar(&[
        "hecke", "--form", "delta", "--weight", "12", "--prime", "2", "--terms", "60", "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["eigenvalue"], "-24");
    assert_eq!(v["is_eigenform"], true);
    assert_eq!(v["euler_product"]["passed"], true);
    assert_eq!(v["commutes_with_next_prime"], true);
    assert_eq!(v["coefficients"][1], "1");
}

#[test]
fn eta_check_passes_and_reports() {
    let out = qchar(&[
        "eta-check",
        "--tau",
        "0.3+1.1i",
        "--tau",
        "2i",
        "--tol",
        "1e-8",
        "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_fast_suite_exits_zero() {
    let out = qchar(&["verify", "--suite", "all", "--fast", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_single_suite() {
    let out = qchar(&["verify", "--suite", "hecke", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
}

#[test]
fn invalid_inputs_exit_nonzero_with_structured_error() {
    for args in [
        vec!["goettsche", "--betti", "1,0,0", "--order", "4"],
        vec!["orbifold", "--n", "9", "--euler-number", "1"],
        vec!["affine", "--type", "B2", "--weight", "1,0", "--depth", "2"],
        vec!["affine", "--type", "A1", "--weight", "0,0", "--depth", "2"],
        vec!["mckay", "--group", "cyclic-0"],
        vec!["hecke", "--form", "delta", "--prime", "4", "--terms", "20"],
        vec![
            "hecke", "--form", "delta", "--weight", "10", "--prime", "2", "--terms", "20",
        ],
        vec!["eta-check", "--tau", "1-2i", "--tol", "1e-8"],
        vec!["verify", "--suite", "nonsense"],
    ] {
        let out = qchar(&args);
        assert!(!out.status.success(), "args {args:?} should fail");
        let stderr = String::from_utf8_lossy(&out.stderr);
        let parsed: serde_json::Value =
            serde_json::from_str(stderr.trim()).expect("structured error on stderr");
        assert!(parsed["error"].is_string(), "args {args:?}");
    }
}

#[test]
fn env_var_sets_default_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_qchar"))
        .args(["orbifold", "--n", "2", "--euler-number", "1"])
        .env("QCHAR_FORMAT", "json")
        .output()
        .expect("binary runs");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(v["orbifold_euler"], "2");
}

#[test]
fn tsv_output_is_tabular() {
    let out = qchar(&["goettsche", "--betti", "1,0,0,0,0", "--order", "3", "--tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for line in text.lines() {
        assert_eq!(line.split('\t').count(), 3, "line {line:?}");
    }
}
