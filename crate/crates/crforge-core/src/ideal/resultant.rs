use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::PolyInX;
use crate::series::Series;

/// Division-free determinant of a square series matrix.
///
/// Uses Berkowitz's recursion for the characteristic polynomial, so only
/// ring operations are needed.
pub fn berkowitz_det(a: &[Vec<Series>], nvars: usize, prec: u32) -> Series {
    let n = a.len();
    let one = Series::one(nvars, prec);
    let mut vect: Vec<Series> = alloc::vec![one.clone()];
    for r in 0..n {
        let mut t: Vec<Series> = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(-&a[r][r]);
        let mut w: Vec<Series> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut dot = Series::zero(nvars, prec);
            for (j, wj) in w.iter().enumerate() {
                dot = &dot + &(&a[r][j] * wj);
            }
            t.push(-&dot);
            let next: Vec<Series> = (0..r)
                .map(|i| {
                    let mut acc = Series::zero(nvars, prec);
                    for (j, wj) in w.iter().enumerate() {
                        acc = &acc + &(&a[i][j] * wj);
                    }
                    acc
                })
                .collect();
            w = next;
        }
        let mut nv: Vec<Series> = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = Series::zero(nvars, prec);
            for (j, vj) in vect.iter().enumerate() {
                if i >= j {
                    acc = &acc + &(&t[i - j] * vj);
                }
            }
            nv.push(acc);
        }
        vect = nv;
    }
    let d = vect.pop().unwrap();
    if n % 2 == 1 {
        -&d
    } else {
        d
    }
}

/// Remainder of `p2` on division by the monic `p1`.
pub fn reduce_mod_monic(p2: &PolyInX, p1: &PolyInX) -> Result<PolyInX> {
    if !p1.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = p1.deg();
    let mut c: Vec<Series> = p2.coeffs().to_vec();
    if n == 0 {
        return Ok(PolyInX::constant(Series::zero(p2.nvars(), p2.prec().min(p1.prec()))));
    }
    while c.len() > n {
        let top = c.pop().unwrap();
        let k = c.len() - n;
        for j in 0..n {
            c[k + j] = &c[k + j] - &(&top * p1.coeff(j));
        }
    }
    while c.len() < n {
        c.push(Series::zero(p2.nvars(), p2.prec()));
    }
    PolyInX::new(c)
}

/// `Res_X(p1, p2)` for monic `p1`, equal to the product of `p2` over the roots of `p1`.
///
/// Computed as the determinant of multiplication by `p2` on the free module
/// spanned by `1, X, …, X^{N-1}` modulo `p1`; this is the Sylvester resultant.
pub fn resultant_x(p1: &PolyInX, p2: &PolyInX) -> Result<Series> {
    if !p1.is_monic() {
        return Err(Error::NotMonic);
    }
    if p1.nvars() != p2.nvars() {
        return Err(Error::VarCountMismatch { left: p1.nvars(), right: p2.nvars() });
    }
    let nv = p1.nvars();
    let prec = p1.prec().min(p2.prec());
    let n = p1.deg();
    if n == 0 {
        return Ok(Series::one(nv, prec));
    }
    let rem = reduce_mod_monic(p2, p1)?;
    // column i holds rem * X^i mod p1
    let mut cols: Vec<Vec<Series>> = Vec::with_capacity(n);
    let mut cur: Vec<Series> = rem.coeffs().to_vec();
    for i in 0..n {
        if i > 0 {
            let top = cur.pop().unwrap();
            cur.insert(0, Series::zero(nv, prec));
            for j in 0..n {
                cur[j] = &cur[j] - &(&top * p1.coeff(j));
            }
        }
        cols.push(cur.clone());
    }
    let m: Vec<Vec<Series>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    Ok(berkowitz_det(&m, nv, prec).truncate(prec))
}

/// Output of [`eliminate_pair`]: `r = Res_X(p1,p2)^N` with `r(Y,Z′,0) = Y^degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub r: Series,
    pub m: u32,
    pub n: u32,
    pub degree: u32,
}

/// Eliminates `X` from `p1 = X^N + Σ a_j X^j` and `p2 = Y^M + K`.
///
/// `p1` has coefficients free of `X` vanishing at the origin; `p2` must
/// restrict to exactly `Y^M` when the variables in `z_second` vanish. The
/// stored terms of both are treated as exact, so the output is exact
/// through the common precision.
pub fn eliminate_pair(p1: &PolyInX, x_var: usize, p2: &Series, y_var: usize, z_second: &[usize]) -> Result<Elimination> {
    let nv = p2.nvars();
    if p1.nvars() != nv {
        return Err(Error::VarCountMismatch { left: p1.nvars(), right: nv });
    }
    if !p1.is_monic() {
        return Err(Error::NotMonic);
    }
    if !p1.lower_coeffs_vanish_at_origin() {
        return Err(Error::Shape("lower coefficients of p1 must vanish at the origin".into()));
    }
    if p1.coeffs().iter().any(|c| c.depends_on(&[x_var])) {
        return Err(Error::Shape("coefficients of p1 must not involve X".into()));
    }
    if z_second.contains(&x_var) || z_second.contains(&y_var) || x_var == y_var {
        return Err(Error::Shape("X, Y and Z'' must be distinct variables".into()));
    }
    let d = p1.prec().min(p2.prec());
    let rest = p2.set_zero(z_second);
    let m = match rest.order() {
        Some(m) => m,
        None => return Err(Error::Shape("p2 vanishes on Z'' = 0".into())),
    };
    let mut ym = alloc::vec![0u32; nv];
    ym[y_var] = m;
    if !rest.eq_through(&Series::monomial(nv, d, &ym, crate::coeff::C::one()), d) {
        return Err(Error::Shape("p2 must reduce to Y^M on Z'' = 0".into()));
    }
    let n = p1.deg() as u32;
    let degree = m * n * n;
    if degree > d {
        return Err(Error::BoundExhausted(alloc::format!(
            "elimination degree {} exceeds precision {}",
            degree, d
        )));
    }
    let xdeg = p2.terms().keys().map(|k| k.0[x_var]).max().unwrap_or(0);
    let coeffs: Vec<Series> = (0..=xdeg).map(|k| p2.coeff_in(&[x_var], &[k]).exact_to(d)).collect();
    let p1d = p1.map(|c| c.exact_to(d));
    let res = resultant_x(&p1d, &PolyInX::new(coeffs)?)?;
    let r = res.pow(n).truncate(d);
    let mut yd = alloc::vec![0u32; nv];
    yd[y_var] = degree;
    if !r.set_zero(z_second).eq_through(&Series::monomial(nv, d, &yd, crate::coeff::C::one()), d) {
        return Err(Error::Shape("eliminant lost its leading term".into()));
    }
    Ok(Elimination { r, m, n, degree })
}
