use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::poly::PolyInX;
use crate::series::Series;
use crate::tuple::SeriesTuple;
use crate::weierstrass::weierstrass_prepare;

use super::{eliminate_pair, membership_bounded, staircase_codim, MemberWitness, SeriesIdeal};

/// A monic relation `P(u, v_j) ∈ I(f)` in the variable `var`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicRelation {
    pub var: usize,
    pub poly: PolyInX,
    pub witness: MemberWitness,
}

/// For `f(u,v)` with `u` the first `p` variables and `v` the next `q`,
/// finds `P_j = v_j^{N_j} + Σ b_{jk}(u) v_j^k` in the ideal of `f`, one per `v_j`.
///
/// Requires `I(f(0,v))` to have a finite staircase within the precision.
/// Every output is checked by a cofactor search of degree `cofactor_degree`.
pub fn monicize_system(f: &SeriesTuple, p: usize, q: usize, cofactor_degree: u32) -> Result<Vec<MonicRelation>> {
    let nv = f.nvars();
    if nv != p + q {
        return Err(Error::VarCountMismatch { left: nv, right: p + q });
    }
    if f.is_empty() || !f.has_zero_constants() {
        return Err(Error::Precondition("components must vanish at the origin".into()));
    }
    let d = f.prec();
    let u: Vec<usize> = (0..p).collect();

    // restriction to u = 0, moved into the ring of v alone
    let map: Vec<usize> = (0..nv).map(|i| i.saturating_sub(p)).collect();
    let at_zero: Vec<Series> = f.iter().map(|g| g.set_zero(&u)).collect();
    let in_v = SeriesTuple::new(at_zero.iter().map(|g| g.remap(q, &map)).collect())?;
    if !staircase_codim(&in_v, d).is_finite() {
        return Err(Error::Precondition("I(f(0,v)) has no finite staircase within the precision".into()));
    }

    // v_j^N = Σ a_jk f_k(0,v), then g_j = Σ a_jk f_k(u,v) = v_j^N + K_j with K_j(0,v) = 0
    let zero_ideal = SeriesIdeal::new(SeriesTuple::new(at_zero)?)?;
    let mut system: Vec<(usize, Series)> = Vec::with_capacity(q);
    for j in 0..q {
        let var = p + j;
        let mut found = None;
        for n in 1..=d {
            let mut e = alloc::vec![0u32; nv];
            e[var] = n;
            let target = Series::monomial(nv, d, &e, C::one());
            if let Some(w) = membership_bounded(&target, &zero_ideal, n).witness() {
                if let Some(w) = upgrade(w, &target, &zero_ideal, d) {
                    found = Some(w.cofactors);
                    break;
                }
            }
        }
        let a = found.ok_or_else(|| Error::BoundExhausted(alloc::format!("no power of v_{} found in I(f(0,v))", j + 1)))?;
        let mut g = Series::zero(nv, d);
        for (ak, fk) in a.iter().zip(f.iter()) {
            g = &g + &(ak * fk);
        }
        system.push((var, g));
    }

    let ideal = SeriesIdeal::new(f.clone())?;
    let mut out = Vec::with_capacity(q);
    for j in 0..q {
        let var = p + j;
        let poly = eliminate_towards(system.clone(), var, &u)?;
        if poly.coeffs().iter().any(|c| c.depends_on(&(p..nv).collect::<Vec<_>>())) {
            return Err(Error::Shape("monic relation still involves other v variables".into()));
        }
        let as_series = poly.to_series(var);
        let found = membership_bounded(&as_series, &ideal, cofactor_degree);
        let witness = match found.witness().and_then(|w| upgrade(w, &as_series, &ideal, d)) {
            Some(w) => w,
            None => {
                return Err(Error::BoundExhausted(alloc::format!(
                    "membership of P_{} not verified with cofactor degree {}",
                    j + 1,
                    cofactor_degree
                )))
            }
        };
        out.push(MonicRelation { var, poly, witness });
    }
    Ok(out)
}

/// The same cofactors, checked through order `d` instead of their own order.
fn upgrade(w: &MemberWitness, f: &Series, ideal: &SeriesIdeal, d: u32) -> Option<MemberWitness> {
    let lifted = MemberWitness { cofactors: w.cofactors.iter().map(|c| c.exact_to(d)).collect(), order: d };
    if lifted.verify(f, ideal) {
        Some(lifted)
    } else {
        None
    }
}

/// Removes every variable but `target` from a system of shape `v_j^{N_j} + K_j`.
fn eliminate_towards(mut system: Vec<(usize, Series)>, target: usize, u: &[usize]) -> Result<PolyInX> {
    while system.len() > 1 {
        let pos = system.iter().position(|(v, _)| *v != target).unwrap();
        let (x, fx) = system.remove(pos);
        let (_, p1) = weierstrass_prepare(&fx, x)?;
        let mut next = Vec::with_capacity(system.len());
        for (y, gy) in &system {
            let e = eliminate_pair(&p1, x, gy, *y, u)?;
            next.push((*y, e.r));
        }
        system = next;
    }
    let (v, g) = &system[0];
    let (_, poly) = weierstrass_prepare(g, *v)?;
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, p: u32, t: &[(&[u32], i64)]) -> Series {
        Series::from_terms(n, p, t.iter().map(|(e, c)| (e.to_vec(), C::int(*c))))
    }

    #[test]
    fn coordinate_ideal() {
        let f = SeriesTuple::identity(2, 6);
        let out = monicize_system(&f, 0, 2, 2).unwrap();
        assert_eq!(out.len(), 2);
        for (j, r) in out.iter().enumerate() {
            assert_eq!(r.poly.deg(), 1);
            assert!(r.poly.coeff(0).is_zero());
            assert_eq!(r.var, j);
        }
    }

    #[test]
    fn single_linear_equation() {
        // (u, v1): v1 - u
        let f = SeriesTuple::new(alloc::vec![s(2, 6, &[(&[0, 1], 1), (&[1, 0], -1)])]).unwrap();
        let out = monicize_system(&f, 1, 1, 2).unwrap();
        assert_eq!(out[0].poly.deg(), 1);
        assert_eq!(out[0].poly.coeff(0), &s(2, 6, &[(&[1, 0], -1)]));
    }

    #[test]
    fn coupled_quadrics() {
        // (u, v1, v2): (v1^2 + u v2, v2^2 + u v1)
        let f = SeriesTuple::new(alloc::vec![
            s(3, 8, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]),
            s(3, 8, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)]),
        ])
        .unwrap();
        let out = monicize_system(&f, 1, 2, 6).unwrap();
        let ideal = SeriesIdeal::new(f.clone()).unwrap();
        // product over the roots of v2^2 + u v1: (v1^4 + u^3 v1), squared by the construction
        let base = s(3, 8, &[(&[0, 4, 0], 1), (&[3, 1, 0], 1)]);
        assert_eq!(out[0].poly.to_series(1), base.pow(2));
        for r in &out {
            assert!(r.poly.is_monic());
            assert!(r.poly.lower_coeffs_vanish_at_origin());
            assert!(r.witness.verify(&r.poly.to_series(r.var), &ideal));
        }
        // by symmetry v1 <-> v2
        assert_eq!(out[1].poly.to_series(2), base.pow(2).remap(3, &[0, 2, 1]));
    }

    #[test]
    fn infinite_fibre_is_rejected() {
        let f = SeriesTuple::new(alloc::vec![s(3, 6, &[(&[0, 1, 1], 1)])]).unwrap();
        assert!(matches!(monicize_system(&f, 1, 2, 2), Err(Error::Precondition(_))));
    }
}
