//! Property suites over the algebra, linear-system and map layers, plus
//! hint-corruption rejection.

mod common;

use common::*;

fn check(name: &str, r: Result<(), String>) {
    if let Err(e) = r {
        panic!("{name}: {e}");
    }
}

#[test]
fn ring_axioms() {
    check("ring axioms", prop_ring_axioms(1000));
}

#[test]
fn euler_identity() {
    check("euler", prop_euler(1000));
}

#[test]
fn nullspace_oracle() {
    check("nullspace", prop_nullspace(1000));
}

#[test]
fn gcd_oracle() {
    check("gcd", prop_gcd(1000));
}

#[test]
fn root_oracle() {
    check("roots", prop_roots(1000));
}

#[test]
fn linear_system_conditions_hold_post_hoc() {
    check("post-hoc", prop_linsys_posthoc(200));
}

#[test]
fn linear_system_dimension_is_monotone() {
    check("monotone", prop_linsys_monotone(200));
}

#[test]
fn maps_are_rescaling_equivariant() {
    check("rescaling", prop_rescaling(500));
}

#[test]
fn image_fits_are_stable_across_sample_sets() {
    check("held-out", prop_heldout_stability(100));
}

#[test]
fn corrupted_hints_are_never_falsely_accepted() {
    let (rejected, valid, false_accept) = hint_corruption(100, 11);
    assert_eq!(false_accept, 0);
    assert!(rejected >= 80, "only {rejected} of 100 corruptions rejected ({valid} genuinely valid)");
}
