use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::PolyInX;
use crate::series::Series;

/// Order of `f(0,…,0,v,0,…)` in the distinguished variable `v`.
pub fn distinguished_order(f: &Series, v: usize) -> Option<u32> {
    f.terms()
        .keys()
        .filter(|m| m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0))
        .map(|m| m.0[v])
        .min()
}

fn split_at_v(h: &Series, v: usize, n: u32) -> (Series, Series) {
    let mut low = Series::zero(h.nvars(), h.prec());
    let mut high = Series::zero(h.nvars(), h.prec().saturating_sub(n));
    for (m, c) in h.terms() {
        if m.0[v] < n {
            low.add_term(m.clone(), c.clone());
        } else {
            let mut m2 = m.clone();
            m2.0[v] -= n;
            high.add_term(m2, c.clone());
        }
    }
    (low, high)
}

/// Weierstrass preparation `f ≡ unit · (v^N + Σ_{l<N} c_l v^l)`.
///
/// The stored terms of `f` are treated as an exact representative. The
/// division runs with a total-degree cutoff of `N·(D+1)`, which keeps every
/// coefficient of `c_l` through degree `D` exact for that representative;
/// both outputs are returned truncated to `D`.
pub fn weierstrass_prepare(f: &Series, v: usize) -> Result<(Series, PolyInX)> {
    let d = f.prec();
    let n = distinguished_order(f, v).ok_or(Error::UndetectableOrder)?;
    let nv = f.nvars();
    if n == 0 {
        let unit = f.clone();
        let monic = PolyInX::new(alloc::vec![Series::one(nv, d)])?;
        return Ok((unit, monic));
    }
    if let Some(monic) = already_prepared(f, v, n) {
        return Ok((Series::one(nv, d), monic));
    }
    let t = n * (d + 1);
    let fe = f.exact_to(t);
    let (p, e) = split_at_v(&fe, v, n);
    let e = e.exact_to(t);
    let einv = e.invert_unit()?;
    let mut vn_exp = alloc::vec![0u32; nv];
    vn_exp[v] = n;
    let g = Series::monomial(nv, t, &vn_exp, crate::coeff::C::one());
    let mut q = Series::zero(nv, t);
    for _ in 0..=t + 1 {
        let h = &g - &(&q * &p);
        let (_, high) = split_at_v(&h.exact_to(t), v, n);
        let next = (&high.exact_to(t) * &einv).exact_to(t);
        if next.eq_through(&q, t) {
            break;
        }
        q = next;
    }
    let h = &g - &(&q * &p);
    let (low, _) = split_at_v(&h, v, n);
    let mut lower = Vec::with_capacity(n as usize);
    for l in 0..n {
        let c = -&low.coeff_in(&[v], &[l]).exact_to(t).truncate(d);
        lower.push(c);
    }
    let unit = q.exact_to(t).invert_unit()?.truncate(d);
    let monic = PolyInX::monic(lower)?;
    Ok((unit, monic))
}

/// `f` is already `v^N + Σ_{l<N} c_l v^l` with `c_l` free of `v`.
fn already_prepared(f: &Series, v: usize, n: u32) -> Option<PolyInX> {
    let mut lead = 0;
    for (m, c) in f.terms() {
        if m.0[v] >= n {
            if m.0[v] != n || m.degree() != n || !c.is_one() {
                return None;
            }
            lead += 1;
        }
    }
    if lead != 1 {
        return None;
    }
    let d = f.prec();
    let lower = (0..n).map(|l| f.coeff_in(&[v], &[l]).exact_to(d)).collect();
    PolyInX::monic(lower).ok()
}

/// The monic factor rebuilt as a series with `X = v`.
pub fn reconstruct(unit: &Series, monic: &PolyInX, v: usize) -> Series {
    unit * &monic.to_series(v)
}
