//! End-to-end checks of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frag-lab"))
}

#[test]
fn rates_emits_exact_json_table() {
    let out = bin()
        .args(["rates", "--n", "4"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let json: serde_json::Value = serde_json::from_str(&body).expect("valid json");
    assert_eq!(json["n"], 4);
    assert_eq!(json["total_num"], 3);
    assert_eq!(json["total_den"], 1);
    assert_eq!(json["entries"].as_array().unwrap().len(), 7);
}

#[test]
fn theta_table_matches_meir_moon() {
    let out = bin()
        .args(["theta", "--j", "2", "--k", "5", "--format", "csv"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    // θ_{2,5}(1,4) = 5/(4·5·4) = 1/16 and θ_{2,5}(4,1) = 5/(1·2·4) = 5/8
    assert!(body.contains("1|4,1,16"), "{body}");
    assert!(body.contains("4|1,5,8"), "{body}");
}

#[test]
fn moments_q_zero_is_exact() {
    let out = bin()
        .args([
            "moments", "--n", "2000", "--replicas", "8", "--t", "0.5", "--q", "0",
            "--format", "csv",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let row = body.lines().nth(1).expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "1"); // estimate exactly 1
    assert_eq!(fields[3], "1"); // exact exactly 1
}

#[test]
fn bad_flags_exit_with_usage_error() {
    let out = bin().args(["moments", "--bogus"]).output().expect("runs");
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().expect("runs");
    assert_eq!(out.status.code(), Some(2));
    // zero replicas is a configuration error, not a partial run
    let out = bin()
        .args(["moments", "--replicas", "0"])
        .output()
        .expect("runs");
    assert_eq!(out.status.code(), Some(2));
}
