mod common;

use qtouch_core::identities::{
    coeff_identity_main, run_check_variant, verify_recu1, verify_zeilberger_recursion, Side, Variant,
};

fn first_failure(id: &str, order: usize) -> Option<usize> {
    run_check_variant(id, order, Variant::Perturbed).unwrap().first_mismatch.map(|m| m.power)
}

#[test]
fn every_catalog_perturbation_fails_early() {
    common::perturbation_suite(6).unwrap();
}

#[test]
fn coeff_main_sign_flip_fails_at_one() {
    assert!(coeff_identity_main(1));
    assert_eq!(first_failure("coeff-main", 20), Some(1));
}

#[test]
fn zeilberger_without_constant_fails() {
    assert!(verify_zeilberger_recursion(Side::Lhs, 10));
    assert!(verify_zeilberger_recursion(Side::Rhs, 10));
    assert!(first_failure("zeil-lhs", 10).is_some());
    assert!(first_failure("zeil-rhs", 10).is_some());
}

#[test]
fn recu1_first_order_perturbation_fails() {
    assert!(first_failure("recu1", 16).is_some());
}

#[test]
fn recu1_public_entry_point() {
    let r = verify_recu1(8, 10).unwrap();
    assert!(r.passed(), "{r:?}");
}
