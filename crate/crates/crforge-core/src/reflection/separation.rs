use alloc::vec::Vec;

use crate::ideal::berkowitz_det;
use crate::poly::PolyInX;
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    /// Two roots agreeing through order `m` agree through the precision.
    Order { m: u32, discriminant_order: u32, squarefree_degree: usize },
    /// The discriminant of the squarefree part vanishes through precision.
    Undetermined,
}

impl Separation {
    pub fn m(&self) -> Option<u32> {
        match self {
            Separation::Order { m, .. } => Some(*m),
            Separation::Undetermined => None,
        }
    }
}

fn is_zero_poly(p: &[Series]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn trim(mut p: Vec<Series>) -> Vec<Series> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

/// `lc(b)^k a = q b + r` with `deg r < deg b`.
fn pseudo_divide(a: &[Series], b: &[Series]) -> (Vec<Series>, Vec<Series>) {
    let nv = b[0].nvars();
    let prec = a.iter().chain(b).map(|s| s.prec()).min().unwrap();
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: Vec<Series> = a.to_vec();
    let mut q: Vec<Series> = (0..a.len().saturating_sub(db).max(1)).map(|_| Series::zero(nv, prec)).collect();
    while r.len() > db && !is_zero_poly(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in q.iter_mut() {
            *c = &*c * &lb;
        }
        q[shift] = &q[shift] + &lr;
        let mut next: Vec<Series> = r.iter().map(|c| c * &lb).collect();
        for (i, bi) in b.iter().enumerate() {
            next[shift + i] = &next[shift + i] - &(&lr * bi);
        }
        next.pop();
        r = trim(next);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    (trim(q), r)
}

fn derivative(p: &[Series]) -> Vec<Series> {
    if p.len() <= 1 {
        return alloc::vec![Series::zero(p[0].nvars(), p[0].prec())];
    }
    p[1..].iter().enumerate().map(|(k, c)| c.scale(&crate::coeff::C::int(k as i64 + 1))).collect()
}

/// Divides every coefficient by the largest monomial dividing all of them.
fn strip_monomial_content(p: Vec<Series>) -> Vec<Series> {
    let nv = p[0].nvars();
    let mut low: Option<Vec<u32>> = None;
    for c in &p {
        for m in c.terms().keys() {
            low = Some(match low {
                None => m.0.clone(),
                Some(l) => l.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
    }
    let low = match low {
        Some(l) if l.iter().any(|&e| e > 0) => l,
        _ => return p,
    };
    let shift: u32 = low.iter().sum();
    p.iter()
        .map(|c| {
            let mut out = Series::zero(nv, c.prec().saturating_sub(shift));
            for (m, v) in c.terms() {
                let e: Vec<u32> = m.0.iter().zip(&low).map(|(a, b)| a - b).collect();
                out.add_term(crate::multi::MultiIndex(e), v.clone());
            }
            out
        })
        .collect()
}

fn pseudo_gcd(a: &[Series], b: &[Series]) -> Vec<Series> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero_poly(&b) && b.len() > 1 {
        let (_, r) = pseudo_divide(&a, &b);
        a = b;
        b = if is_zero_poly(&r) { r } else { strip_monomial_content(r) };
    }
    if is_zero_poly(&b) {
        a
    } else {
        // a nonzero constant remainder: coprime
        alloc::vec![Series::one(b[0].nvars(), b[0].prec())]
    }
}

/// Determinant of the Sylvester matrix of `a` and `b`.
fn sylvester_resultant(a: &[Series], b: &[Series]) -> Series {
    let nv = a[0].nvars();
    let prec = a.iter().chain(b).map(|s| s.prec()).min().unwrap();
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Series::one(nv, prec);
    }
    let mut rows: Vec<Vec<Series>> = Vec::with_capacity(size);
    for (poly, count, deg) in [(a, n, m), (b, m, n)] {
        for i in 0..count {
            let mut row: Vec<Series> = (0..size).map(|_| Series::zero(nv, prec)).collect();
            for k in 0..=deg {
                row[i + k] = poly[deg - k].clone();
            }
            rows.push(row);
        }
    }
    berkowitz_det(&rows, nv, prec).truncate(prec)
}

/// `m = 2 · ord(disc(P_red)) + 1`, `P_red` the squarefree part of `P`.
pub fn separation_order(p: &PolyInX) -> Separation {
    let coeffs = trim(p.coeffs().to_vec());
    if coeffs.last().map(|c| c.is_zero()).unwrap_or(true) {
        return Separation::Undetermined;
    }
    if coeffs.len() <= 2 {
        return Separation::Order { m: 1, discriminant_order: 0, squarefree_degree: coeffs.len() - 1 };
    }
    let g = pseudo_gcd(&coeffs, &derivative(&coeffs));
    let red = if g.len() > 1 {
        let g = strip_monomial_content(g);
        let lead = g.last().unwrap().clone();
        match lead.invert_unit() {
            Ok(inv) => {
                let monic: Vec<Series> = g.iter().map(|c| c * &inv).collect();
                pseudo_divide(&coeffs, &monic).0
            }
            Err(_) => strip_monomial_content(pseudo_divide(&coeffs, &g).0),
        }
    } else {
        coeffs
    };
    let deg = red.len() - 1;
    if deg <= 1 {
        return Separation::Order { m: 1, discriminant_order: 0, squarefree_degree: deg };
    }
    let res = sylvester_resultant(&red, &derivative(&red));
    let lead = red[deg].order();
    match (res.order(), lead) {
        (Some(o), Some(l)) => {
            let disc = o.saturating_sub(l);
            Separation::Order { m: 2 * disc + 1, discriminant_order: disc, squarefree_degree: deg }
        }
        _ => Separation::Undetermined,
    }
}

/// Whether distinct entries of `roots` never agree through order `m`.
pub fn roots_separated(roots: &[Series], m: u32) -> bool {
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if a != b && a.eq_through(b, m) {
                return false;
            }
        }
    }
    true
}
