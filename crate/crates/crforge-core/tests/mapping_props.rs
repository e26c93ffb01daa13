use crforge_core::coeff::C;
use crforge_core::mapping::{
    check_sends, find_relation, finite_map_test, kernel_vector_field, total_degeneracy_test, FormalMapNF,
};
use crforge_core::series::Series;
use crforge_core::tuple::SeriesTuple;
use proptest::prelude::*;

mod common;
use common::{hermitian_nf, raw_terms, D_PROP as D};

fn poly_tuple(nv: usize, raw: &[Vec<(Vec<u32>, i64)>]) -> SeriesTuple {
    SeriesTuple::new(
        raw.iter()
            .map(|ts| {
                let mut s = Series::zero(nv, D);
                for (e, c) in ts {
                    if e.iter().sum::<u32>() > 0 {
                        s = &s + &Series::monomial(nv, D, e, C::int(*c));
                    }
                }
                s
            })
            .collect(),
    )
    .unwrap()
}

fn raw_poly(nv: usize, comps: usize) -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64)>>> {
    prop::collection::vec(prop::collection::vec((prop::collection::vec(0u32..3, nv), -3i64..4), 1..4), comps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_sends(n in 1usize..3, d in 1usize..3, raw in raw_terms()) {
        let m = hermitian_nf(n, d, &raw);
        let id = FormalMapNF::identity(n, d, D);
        prop_assert!(check_sends(&m, &m, &id).unwrap().sends);
    }

    #[test]
    fn invertible_linear_maps_are_finite(a in -3i64..4, b in -3i64..4, c in -3i64..4, e in -3i64..4) {
        prop_assume!(a * e - b * c != 0);
        let x = |i| Series::var(2, D, i);
        let k = SeriesTuple::new(vec![
            &x(0).scale(&C::int(a)) + &x(1).scale(&C::int(b)),
            &x(0).scale(&C::int(c)) + &x(1).scale(&C::int(e)),
        ]).unwrap();
        prop_assert_eq!(finite_map_test(&k, D).unwrap().codim(), Some(1));
    }

    #[test]
    fn relations_and_kernels_reverify(raw in raw_poly(2, 3)) {
        let k = poly_tuple(2, &raw);
        prop_assume!(k.has_zero_constants());
        if let Some(h) = find_relation(&k, 3) {
            prop_assert!(!h.is_zero());
            prop_assert!(h.compose(&k).unwrap().is_zero());
        }
        if let Some(x) = kernel_vector_field(&k, 2) {
            prop_assert!(x.coeffs.iter().any(|c| !c.is_zero()));
            for s in k.iter() {
                prop_assert!(x.apply(s).is_zero());
            }
        }
    }

    #[test]
    fn degeneracy_is_invariant_under_linear_precomposition(
        raw in raw_poly(3, 2),
        a in -3i64..4, b in -3i64..4, c in -3i64..4, e in -3i64..4,
    ) {
        prop_assume!(a * e - b * c != 0);
        let m = hermitian_nf(2, 1, &[]);
        let f = poly_tuple(3, &raw);
        let g = SeriesTuple::new(vec![Series::var(3, D, 2)]).unwrap();
        let h = FormalMapNF::new(2, 1, f, g).unwrap();
        let x = |i| Series::var(3, D, i);
        let lin = FormalMapNF::new(
            2,
            1,
            SeriesTuple::new(vec![
                &x(0).scale(&C::int(a)) + &x(1).scale(&C::int(b)),
                &x(0).scale(&C::int(c)) + &x(1).scale(&C::int(e)),
            ]).unwrap(),
            SeriesTuple::new(vec![x(2)]).unwrap(),
        ).unwrap();
        let pre = lin.then(&h).unwrap();
        prop_assert_eq!(
            total_degeneracy_test(&m, &m, &h).unwrap().degenerate,
            total_degeneracy_test(&m, &m, &pre).unwrap().degenerate
        );
    }
}
