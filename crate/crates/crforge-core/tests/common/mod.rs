#![allow(dead_code)]

use crforge_core::coeff::C;
use crforge_core::geometry::GenericSubmanifoldNF;
use crforge_core::mapping::FormalMapNF;
use crforge_core::series::Series;
use crforge_core::tuple::SeriesTuple;
use proptest::prelude::*;

pub const D: u32 = 8;
/// The full-rank minor of `∂v³` for [`product_type`] has its lowest term in degree 10.
pub const D_PRODUCT: u32 = 12;

pub fn nf(n: usize, d: usize, q: Vec<Series>) -> GenericSubmanifoldNF {
    GenericSubmanifoldNF::new(n, d, SeriesTuple::new(q).unwrap()).unwrap()
}

pub fn two_i() -> C {
    C::gauss(0, 2)
}

pub fn heisenberg() -> GenericSubmanifoldNF {
    let q = Series::from_terms(3, D, [(vec![0, 0, 1], C::one()), (vec![1, 1, 0], two_i())]);
    nf(1, 1, vec![q])
}

/// Im w1 = |z|², Im w2 = 0.
pub fn flat_direction() -> GenericSubmanifoldNF {
    let q1 = Series::from_terms(4, D, [(vec![0, 0, 1, 0], C::one()), (vec![1, 1, 0, 0], two_i())]);
    let q2 = Series::var(4, D, 3);
    nf(1, 2, vec![q1, q2])
}

/// Im w1 = |z1 z2|², Im w2 = |z1 z2|⁴.
pub fn product_type_at(p: u32) -> GenericSubmanifoldNF {
    let q1 = Series::from_terms(6, p, [(vec![0, 0, 0, 0, 1, 0], C::one()), (vec![1, 1, 1, 1, 0, 0], two_i())]);
    let q2 = Series::from_terms(6, p, [(vec![0, 0, 0, 0, 0, 1], C::one()), (vec![2, 2, 2, 2, 0, 0], two_i())]);
    nf(2, 2, vec![q1, q2])
}

pub fn product_type() -> GenericSubmanifoldNF {
    product_type_at(D_PRODUCT)
}

/// Im w1 = |z1|² − |z2|², Im w2 = |z1|⁴ − |z2|⁴.
pub fn split_quartic() -> GenericSubmanifoldNF {
    let q1 = Series::from_terms(
        6,
        D,
        [(vec![0, 0, 0, 0, 1, 0], C::one()), (vec![1, 0, 1, 0, 0, 0], two_i()), (vec![0, 1, 0, 1, 0, 0], -two_i())],
    );
    let q2 = Series::from_terms(
        6,
        D,
        [(vec![0, 0, 0, 0, 0, 1], C::one()), (vec![2, 0, 2, 0, 0, 0], two_i()), (vec![0, 2, 0, 2, 0, 0], -two_i())],
    );
    nf(2, 2, vec![q1, q2])
}

/// `Σ_{k=2}^{p} k! x^k` in variable `var` of `nv`: a truncation of a divergent series.
pub fn factorial_series(nv: usize, var: usize, p: u32) -> Series {
    let mut s = Series::zero(nv, p);
    let mut fact = 1i64;
    for k in 1..=p {
        fact *= k as i64;
        if k >= 2 {
            let mut e = vec![0u32; nv];
            e[var] = k;
            s = &s + &Series::monomial(nv, p, &e, C::int(fact));
        }
    }
    s
}

/// `exp(s)` for `s(0) = 0`.
pub fn exp_series(s: &Series) -> Series {
    let p = s.prec();
    let mut acc = Series::one(s.nvars(), p);
    let mut term = Series::one(s.nvars(), p);
    for k in 1..=p {
        term = (&term * s).scale(&C::ratio(1, k as i64));
        acc = &acc + &term;
    }
    acc
}

fn tuple(v: Vec<Series>) -> SeriesTuple {
    SeriesTuple::new(v).unwrap()
}

/// `(z, w1, w2 + f(w2))` on the flat-direction manifold.
pub fn flat_direction_map() -> FormalMapNF {
    let v = |i| Series::var(3, D, i);
    let f = factorial_series(3, 2, D);
    FormalMapNF::new(1, 2, tuple(vec![v(0)]), tuple(vec![v(1), &v(2) + &f])).unwrap()
}

/// `(z1 e^{f(z1)}, z2 e^{−f(z1)}, w1, w2)` on the product-type manifold.
pub fn product_type_map(p: u32) -> FormalMapNF {
    let v = |i| Series::var(4, p, i);
    let f = factorial_series(4, 0, p);
    let up = exp_series(&f);
    let down = exp_series(&-&f);
    FormalMapNF::new(2, 2, tuple(vec![&v(0) * &up, &v(1) * &down]), tuple(vec![v(2), v(3)])).unwrap()
}

/// `(f(z1), f(z1), 0, 0)` on the split quartic.
pub fn split_quartic_map() -> FormalMapNF {
    let f = &Series::var(4, D, 0) + &factorial_series(4, 0, D);
    FormalMapNF::new(2, 2, tuple(vec![f.clone(), f]), tuple(vec![Series::zero(4, D), Series::zero(4, D)])).unwrap()
}

/// `(z, w + w²)` on the Heisenberg hypersurface.
pub fn heisenberg_bad_map() -> FormalMapNF {
    let g = Series::from_terms(2, D, [(vec![0, 1], C::one()), (vec![0, 2], C::one())]);
    FormalMapNF::new(1, 1, tuple(vec![Series::var(2, D, 0)]), tuple(vec![g])).unwrap()
}

/// `(λz, λ²w)`.
pub fn dilation(lambda: i64) -> FormalMapNF {
    FormalMapNF::new(
        1,
        1,
        tuple(vec![Series::monomial(2, D, &[1, 0], C::int(lambda))]),
        tuple(vec![Series::monomial(2, D, &[0, 1], C::int(lambda * lambda))]),
    )
    .unwrap()
}

/// `(z, w) ↦ (z, w)/(1 − r w)` with `r = num/den`, expanded through `D`.
pub fn chern_moser(num: i64, den: i64) -> FormalMapNF {
    let r = C::ratio(num, den);
    let mut geom = Series::zero(2, D);
    for k in 0..D {
        geom.add_term(crforge_core::multi::MultiIndex(vec![0, k]), r.pow(k));
    }
    let f = &Series::var(2, D, 0) * &geom;
    let g = &Series::var(2, D, 1) * &geom;
    FormalMapNF::new(1, 1, tuple(vec![f]), tuple(vec![g])).unwrap()
}

pub const D_PROP: u32 = 6;

/// `Q_l = τ_l + 2i φ_l(z, χ)` with `φ_l` Hermitian and vanishing on `z = 0` and `χ = 0`.
pub fn hermitian_nf(n: usize, d: usize, raw: &[(usize, usize, usize, i64, i64)]) -> GenericSubmanifoldNF {
    let nv = 2 * n + d;
    let mut q: Vec<Series> = (0..d).map(|l| Series::var(nv, D_PROP, 2 * n + l)).collect();
    for &(l, a, b, re, im) in raw {
        let l = l % d;
        let (a, b) = (a % n, b % n);
        let c = C::gauss(re, im);
        let mut e1 = vec![0u32; nv];
        e1[a] += 1;
        e1[n + b] += 1;
        let mut e2 = vec![0u32; nv];
        e2[b] += 1;
        e2[n + a] += 1;
        let two_i = C::gauss(0, 2);
        q[l] = &q[l] + &Series::monomial(nv, D_PROP, &e1, two_i.clone() * c.clone());
        q[l] = &q[l] + &Series::monomial(nv, D_PROP, &e2, two_i * c.conj());
    }
    GenericSubmanifoldNF::new(n, d, SeriesTuple::new(q).unwrap()).unwrap()
}

pub fn raw_terms() -> impl Strategy<Value = Vec<(usize, usize, usize, i64, i64)>> {
    prop::collection::vec((0usize..2, 0usize..2, 0usize..2, -2i64..3, -2i64..3), 0..4)
}

