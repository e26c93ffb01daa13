use alloc::vec::Vec;

use num_integer::Integer;

use crate::coeff::C;
use crate::series::Series;
use crate::tuple::SeriesTuple;

/// A formal curve `s ↦ μ(s)` through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveWitness {
    pub components: Vec<Series>,
    pub order: u32,
}

/// Whether every generator vanishes on `μ` through `order`.
pub fn verify_curve(generators: &SeriesTuple, curve: &CurveWitness, order: u32) -> bool {
    if curve.components.len() != generators.nvars()
        || curve.components.iter().any(|c| c.nvars() != 1 || !c.constant_term().is_zero())
    {
        return false;
    }
    let mu = match SeriesTuple::new(curve.components.clone()) {
        Ok(t) => t,
        Err(_) => return false,
    };
    generators.iter().all(|g| match g.compose(&mu) {
        Ok(h) => h.prec() >= order && h.is_zero_through(order),
        Err(_) => false,
    })
}

fn candidates(breadth: usize) -> Vec<C> {
    let base = [
        C::int(1),
        C::int(-1),
        C::int(2),
        C::int(-2),
        C::gauss(0, 1),
        C::gauss(0, -1),
        C::ratio(1, 2),
        C::ratio(-1, 2),
        C::gauss(1, 1),
        C::gauss(1, -1),
    ];
    let mut out: Vec<C> = base.iter().take(breadth).cloned().collect();
    let mut k = 3;
    while out.len() < breadth {
        out.push(C::int(k));
        if out.len() < breadth {
            out.push(C::int(-k));
        }
        k += 1;
    }
    out
}

fn exponent_patterns(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = Vec::new();
    let mut cur = alloc::vec![0u32; n];
    loop {
        let nz: Vec<u32> = cur.iter().copied().filter(|&e| e > 0).collect();
        if !nz.is_empty() && nz.iter().fold(0u32, |g, &e| g.gcd(&e)) == 1 {
            all.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                all.sort_by_key(|e| {
                    let k = e.iter().filter(|&&x| x > 0).count();
                    let s: u32 = e.iter().sum();
                    (k, s, e.iter().map(|&x| if x == 0 { u32::MAX } else { x }).collect::<Vec<_>>())
                });
                return all;
            }
            cur[i] += 1;
            if cur[i] <= bound {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Searches curves `μ_j(s) = c_j s^{e_j}` with `e_j ≤ exponent_bound` on
/// which all generators vanish through their precision.
///
/// Zero components are allowed. One nonzero coefficient is normalised to 1
/// by rescaling `s`; the others range over `breadth` small Gaussian
/// rationals. `None` is not a proof that no curve exists.
pub fn find_monomial_curve(generators: &SeriesTuple, exponent_bound: u32, breadth: usize) -> Option<CurveWitness> {
    let n = generators.nvars();
    let d = generators.prec();
    let bound = exponent_bound.min(d);
    let cands = candidates(breadth.max(1));
    for pat in exponent_patterns(n, bound) {
        let nz: Vec<usize> = (0..n).filter(|&j| pat[j] > 0).collect();
        let free = nz.len() - 1;
        let total = cands.len().checked_pow(free as u32)?;
        for idx in 0..total {
            let mut coeffs = alloc::vec![C::zero(); n];
            coeffs[nz[0]] = C::one();
            let mut k = idx;
            for &j in &nz[1..] {
                coeffs[j] = cands[k % cands.len()].clone();
                k /= cands.len();
            }
            let components: Vec<Series> = (0..n)
                .map(|j| {
                    if pat[j] == 0 {
                        Series::zero(1, d)
                    } else {
                        Series::monomial(1, d, &[pat[j]], coeffs[j].clone())
                    }
                })
                .collect();
            let w = CurveWitness { components, order: d };
            if verify_curve(generators, &w, d) {
                return Some(w);
            }
        }
    }
    None
}


#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, p: u32, t: &[(&[u32], i64)]) -> Series {
        Series::from_terms(n, p, t.iter().map(|(e, c)| (e.to_vec(), C::int(*c))))
    }

    fn curve(c: &[(u32, i64)], d: u32) -> CurveWitness {
        let components = c
            .iter()
            .map(|&(e, k)| if k == 0 { Series::zero(1, d) } else { Series::monomial(1, d, &[e], C::int(k)) })
            .collect();
        CurveWitness { components, order: d }
    }

    #[test]
    fn verification() {
        let g = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[1, 1], 1)]), s(2, 8, &[(&[2, 0], 1)])]).unwrap();
        assert!(verify_curve(&g, &curve(&[(1, 0), (1, 1)], 8), 8));
        let h = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[1, 0], 1)])]).unwrap();
        assert!(!verify_curve(&h, &curve(&[(1, 1), (1, 0)], 8), 8));
        assert!(!verify_curve(&g, &curve(&[(1, 0), (1, 1)], 8), 9));
    }

    #[test]
    fn search() {
        let g = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[1, 1], 1)])]).unwrap();
        assert_eq!(find_monomial_curve(&g, 4, 4), Some(curve(&[(1, 1), (1, 0)], 8)));
        let id = SeriesTuple::identity(2, 8);
        assert_eq!(find_monomial_curve(&id, 4, 4), None);
        let cusp = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[2, 0], 1), (&[0, 3], -1)])]).unwrap();
        assert_eq!(find_monomial_curve(&cusp, 4, 4), Some(curve(&[(3, 1), (2, 1)], 8)));
    }
}
