use serde_json::Value;
use std::process::{Command, Output};

fn halfplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfplane")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    halfplane(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = halfplane(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("well-formed JSON")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(halfplane(args).stdout).unwrap()
}

#[test]
fn orders_match_closed_form() {
    assert_eq!(code(&["orders", "--p", "5", "--f", "2"]), 0);
    let v = json(&["orders", "--p", "3", "--json"]);
    assert_eq!(v["matches_closed_form"], true);
    assert_eq!(v["table"]["omega_log"], serde_json::json!([2, 2]));
}

#[test]
fn bad_primes_are_usage_errors() {
    for p in ["2", "9", "1"] {
        assert_eq!(code(&["orders", "--p", p]), 2, "p={p}");
    }
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["cohomology", "--k0", "1", "--k1", "1", "--f", "2"]), 2);
}

#[test]
fn ball_cap_is_a_resource_error() {
    assert_eq!(code(&["cohomology", "--k0", "1", "--k1", "1", "--radius", "8", "--max-ball", "50"]), 3);
}

#[test]
fn bundle_info_json() {
    let v = json(&["bundle", "info", "--k0", "1", "--k1", "1", "--json"]);
    assert_eq!(v["weight"], -1);
    assert_eq!(v["positivity"], "positive");
}

#[test]
fn cohomology_json_and_seed_invariance() {
    let a = json(&["cohomology", "--k0", "4", "--k1", "-2", "--radius", "2", "--json"]);
    let b = json(&["cohomology", "--k0", "4", "--k1", "-2", "--radius", "2", "--seed", "11", "--json"]);
    assert_eq!((a["h0"].clone(), a["h1"].clone()), (b["h0"].clone(), b["h1"].clone()));
    assert_eq!(a["euler"].as_i64().unwrap(), a["h0"].as_i64().unwrap() - a["h1"].as_i64().unwrap());
    assert!(a.get("h0_basis").is_none());
    let c = json(&["cohomology", "--k0", "2", "--k1", "0", "--radius", "1", "--basis", "--json"]);
    assert_eq!(c["h0_basis"].as_array().unwrap().len() as i64, c["h0"].as_i64().unwrap());
}

#[test]
fn sweep_records() {
    let out = stdout(&["sweep", "--k-min", "0", "--k-max", "4", "--sum", "2", "--radius-max", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,f,k0,k1,r,radius,h0,h1,euler,seed");
    assert_eq!(lines.len(), 10);
    assert_eq!(out, stdout(&["sweep", "--k-min", "0", "--k-max", "4", "--sum", "2", "--radius-max", "3"]));
    let seeded = stdout(&["sweep", "--k-min", "0", "--k-max", "4", "--sum", "2", "--radius-max", "3", "--seed", "5"]);
    let strip = |s: &str| s.lines().skip(1).map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&out), strip(&seeded));
    let v = json(&["sweep", "--sum", "2", "--radius-max", "3", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 9);
}

#[test]
fn empty_sweep_is_header_only() {
    assert_eq!(stdout(&["sweep", "--k-min", "3", "--k-max", "1"]).lines().count(), 1);
}

#[test]
fn cartier_scan_json() {
    let v = json(&["cartier", "scan", "--p", "5", "--m", "2", "--json"]);
    assert_eq!(v["pi_zero_count"], 5);
    assert_eq!(v["f_zero_count"], 25);
}

#[test]
fn hecke_verify_json() {
    let v = json(&["hecke", "verify", "--k", "2", "--json"]);
    for key in ["recurrence_ok", "support_ok", "parity_ok", "degree_support_ok", "equivariance_ok"] {
        assert_eq!(v[key], true, "{key}");
    }
    assert_eq!(code(&["hecke", "verify", "--window", "2"]), 2);
}

#[test]
fn supersingular_json() {
    let v = json(&["supersingular", "--json"]);
    assert_eq!(v["bundle_count"], 12);
    assert_eq!(v["rep_count"], 12);
    assert_eq!(v["bijective"], true);
    assert!(v["lambda_nonzero"].as_array().unwrap().iter().all(|l| l["nonzero"] == true));
}

#[test]
fn selftest_exit_codes() {
    let v = json(&["selftest", "--json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 11);
    let out = halfplane(&["selftest", "--force-fail", "4"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]  4."));
}
