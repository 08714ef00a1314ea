//! One test per acceptance criterion; each prints a single status line.

use halfplane::acceptance;

fn criterion(id: u32) {
    let r = acceptance::run(id).expect("known criterion");
    println!("{}", r.line());
    assert!(r.check_ok, "criterion {id} failed: {}", r.detail);
    assert!(r.elapsed_ms <= r.limit_ms, "criterion {id} took {} ms, budget {} ms", r.elapsed_ms, r.limit_ms);
}

#[test]
fn c01_order_tables() {
    criterion(1);
}

#[test]
fn c02_cartier_axioms() {
    criterion(2);
}

#[test]
fn c03_vanishing_loci() {
    criterion(3);
}

#[test]
fn c04_evaluation_kernels() {
    criterion(4);
}

#[test]
fn c05_euler_identity() {
    criterion(5);
}

#[test]
fn c06_truncated_vanishing() {
    criterion(6);
}

#[test]
fn c07_filtration_case_six() {
    criterion(7);
}

#[test]
fn c08_hecke_identities() {
    criterion(8);
}

#[test]
fn c09_phi_tilde() {
    criterion(9);
}

#[test]
fn c10_bijection() {
    criterion(10);
}

#[test]
fn c11_chart_invariance() {
    criterion(11);
}
