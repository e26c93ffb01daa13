mod common;

use common::*;
use crforge_core::mapping::check_sends;
use crforge_core::reflection::{
    build_reflection_system, expand_reflection, pick_r, reflection_identities, verify_reflection, ReflectionOptions,
};
use crforge_core::error::Error;
use crforge_core::mapping::FormalMapNF;

#[test]
fn chern_moser_family_sends() {
    let m = heisenberg();
    for (a, b) in [(0, 1), (1, 1), (-1, 2), (3, 1)] {
        assert!(check_sends(&m, &m, &chern_moser(a, b)).unwrap().sends, "r = {a}/{b}");
    }
}

#[test]
fn dilation_identities_verify() {
    let m = heisenberg();
    let h = dilation(2);
    let id = reflection_identities(&m, &m, &h, &ReflectionOptions::default()).unwrap();
    assert_eq!(id.r, 1);
    assert!(id.polys.iter().all(|p| p.is_monic() && p.deg() == 1));
    assert!(verify_reflection(&m, &id, &h).unwrap());
}

#[test]
fn jet_stability_under_chern_moser() {
    let m = heisenberg();
    let opts = ReflectionOptions::default();
    let base = reflection_identities(&m, &m, &FormalMapNF::identity(1, 1, D), &opts).unwrap();
    for (a, b) in [(1, 1), (-1, 2)] {
        let h = chern_moser(a, b);
        let id = reflection_identities(&m, &m, &h, &opts).unwrap();
        assert_eq!(id.polys, base.polys);
        assert!(verify_reflection(&m, &base, &h).unwrap());
    }
}

#[test]
fn flat_direction_identities() {
    let m = flat_direction();
    let h = flat_direction_map();
    let id = reflection_identities(&m, &m, &h, &ReflectionOptions::default()).unwrap();
    assert_eq!(id.polys.len(), 3);
    assert!(verify_reflection(&m, &id, &h).unwrap());
}

#[test]
fn split_quartic_is_a_hypothesis_failure() {
    let m = split_quartic();
    let h = split_quartic_map();
    assert!(matches!(pick_r(&m, &h, 3, 6), Err(Error::Hypothesis(_))));
}

#[test]
fn expansion_reassembles() {
    let m = flat_direction();
    let e = expand_reflection(&m, &flat_direction_map(), D).unwrap();
    assert_eq!(e.coeffs.len(), e.alphas.len());
    let _ = build_reflection_system(&m, &m, &flat_direction_map(), 1).unwrap();
}
