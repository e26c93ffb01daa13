use crforge_core::geometry::{
    cr_basis, essential_finiteness_nf, essential_generators, finite_type_test, verify_segre_identity, GeneratorForm,
};
use crforge_core::ideal::verify_curve;
use proptest::prelude::*;

mod common;
use common::{hermitian_nf, raw_terms, D_PROP as D};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn segre_identity_holds(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        for k in 0..=3 {
            prop_assert!(verify_segre_identity(&m, k).unwrap());
        }
    }

    #[test]
    fn antiholomorphic_generators_reduce_to_zero(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        for g in m.generators(GeneratorForm::Antiholo).iter() {
            prop_assert!(m.reduce_mod_m(g).unwrap().is_zero());
        }
    }

    #[test]
    fn cr_fields_are_tangent(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        for l in cr_basis(&m) {
            for g in m.generators(GeneratorForm::Holo).iter() {
                prop_assert!(m.reduce_mod_m(&l.apply(g)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn ranks_nondecreasing(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        let rep = finite_type_test(&m, 2 * (d + 1), 17).unwrap();
        prop_assert!(rep.ranks.windows(2).all(|w| w[0].rank <= w[1].rank));
    }

    #[test]
    fn curve_certificates_verify(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        let rep = essential_finiteness_nf(&m, 2 * D / 3, D);
        if let Some(w) = &rep.curve {
            prop_assert!(!rep.is_finite());
            prop_assert!(verify_curve(&essential_generators(&m, 2 * D / 3), w, w.order));
        }
    }
}
