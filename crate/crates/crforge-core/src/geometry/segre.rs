use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::Result;
use crate::linalg;
use crate::multi::MultiIndex;
use crate::rank::{eval_matrix, generic_rank, nonvanishing_minor, series_det, Deficiency, MinorCertificate, PointSampler, RankMode, SAMPLE_RETRIES};
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::manifold::{GeneratorForm, GenericSubmanifoldNF};

/// The `w`-part of `v^k`, `d` series in `kn` variables ordered `(z, χ¹, z¹, χ², …)`.
fn w_part(m: &GenericSubmanifoldNF, k: usize) -> Result<Vec<Series>> {
    let n = m.n();
    let d = m.d();
    let p = m.prec();
    if k <= 1 {
        return Ok((0..d).map(|_| Series::zero(k * n, p)).collect());
    }
    let prev = w_part(m, k - 1)?;
    let nv = k * n;
    let shift: Vec<usize> = (0..(k - 1) * n).map(|i| n + i).collect();
    let mut subs: Vec<Series> = Vec::with_capacity(2 * n + d);
    for i in 0..2 * n {
        subs.push(Series::var(nv, p, i));
    }
    for s in &prev {
        subs.push(s.bar_conjugate().remap(nv, &shift));
    }
    let subs = SeriesTuple::new(subs)?;
    m.q().iter().map(|q| q.compose(&subs)).collect()
}

/// The `k`-th Segre mapping `v^k : C^{kn} → C^N`.
pub fn segre_map(m: &GenericSubmanifoldNF, k: usize) -> Result<SeriesTuple> {
    let n = m.n();
    let p = m.prec();
    let nv = k * n;
    let mut comps: Vec<Series> =
        (0..n).map(|i| if k == 0 { Series::zero(0, p) } else { Series::var(nv, p, i) }).collect();
    comps.extend(w_part(m, k)?);
    SeriesTuple::new(comps)
}

/// `(v^k(z,ξ), v̄^{k-1}(ξ))` as a map into the ambient `(Z, ζ)`, `k ≥ 1`.
pub fn segre_chain(m: &GenericSubmanifoldNF, k: usize) -> Result<SeriesTuple> {
    let n = m.n();
    let upper = segre_map(m, k)?;
    let nv = k * n;
    let shift: Vec<usize> = (0..(k - 1) * n).map(|i| n + i).collect();
    let lower = segre_map(m, k - 1)?.bar_conjugate().remap(nv, &shift).with_nvars(nv);
    upper.concat(&lower)
}

/// Whether `f(v^{k+1}(z,ξ), v̄^k(ξ)) ≡ 0` through precision for both generator families.
pub fn verify_segre_identity(m: &GenericSubmanifoldNF, k: usize) -> Result<bool> {
    let subs = segre_chain(m, k + 1)?;
    for form in [GeneratorForm::Holo, GeneratorForm::Antiholo] {
        for g in m.generators(form).iter() {
            if !g.compose(&subs)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteType {
    Yes { k1: usize },
    NoUpTo { k: usize },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RungRank {
    pub k: usize,
    pub rank: usize,
    pub deficiency: Deficiency,
    pub certificate: Option<MinorCertificate>,
}

/// An `N × N` minor of `∂v^k` with an exactly known nonzero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMinor {
    pub k: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub term: MultiIndex,
    pub coeff: C,
}

/// A point with `v^{2k₁}(z₀, ξ₀) = 0` where the Jacobian has rank `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankPoint {
    pub k: usize,
    pub point: Vec<C>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeReport {
    pub verdict: FiniteType,
    pub ranks: Vec<RungRank>,
    pub exact_minor: Option<SymbolicMinor>,
    pub rank_point: Option<RankPoint>,
}

fn symbolic_full_minor(v: &SeriesTuple, k: usize, hint: Option<&MinorCertificate>) -> Option<SymbolicMinor> {
    let jac = v.jacobian();
    let full = v.len();
    let pick = |rows: Vec<usize>, cols: Vec<usize>, det: &Series| {
        det.terms().iter().next().map(|(m, c)| SymbolicMinor { k, rows, cols, term: m.clone(), coeff: c.clone() })
    };
    if let Some(h) = hint {
        if h.rows.len() == full {
            let sub: Vec<Vec<Series>> = h.rows.iter().map(|&i| h.cols.iter().map(|&j| jac[i][j].clone()).collect()).collect();
            let det = series_det(&sub);
            if let Some(s) = pick(h.rows.clone(), h.cols.clone(), &det) {
                return Some(s);
            }
        }
    }
    let (rows, cols, det) = nonvanishing_minor(&jac, full)?;
    pick(rows, cols, &det)
}

/// Palindromic points `(0, x₁, …, x_{2k-1})` with `x_i = x_{2k-i}` lie in the zero fibre of `v^{2k}`.
fn find_rank_point(m: &GenericSubmanifoldNF, k1: usize, seed: u64) -> Result<Option<RankPoint>> {
    let n = m.n();
    let k = 2 * k1;
    let v = segre_map(m, k)?;
    let jac = v.jacobian();
    let mut sampler = PointSampler::new(seed ^ 0x5e67e);
    for _ in 0..SAMPLE_RETRIES {
        let half: Vec<Vec<C>> = (0..k1).map(|_| sampler.point(n)).collect();
        let mut point = alloc::vec![C::zero(); n];
        for i in 1..k {
            let src = if i <= k1 { i - 1 } else { k - i - 1 };
            point.extend(half[src].iter().cloned());
        }
        if !v.eval(&point).iter().all(|c| c.is_zero()) {
            continue;
        }
        let vals = eval_matrix(&jac, &point);
        let (rows, cols) = linalg::maximal_minor(&vals);
        if rows.len() == m.big_n() {
            let sub: Vec<Vec<C>> = rows.iter().map(|&i| cols.iter().map(|&j| vals[i][j].clone()).collect()).collect();
            let minor = linalg::det(&sub);
            return Ok(Some(RankPoint { k, point, rows, cols, minor }));
        }
    }
    Ok(None)
}

/// Generic ranks of the Segre mappings `v^1, …, v^{k_max}`.
///
/// Finite type is reported at the first `k` with an exact nonvanishing
/// `N × N` minor. Absence of finite type needs a symbolic deficiency
/// certificate at `k = d + 1`.
pub fn finite_type_test(m: &GenericSubmanifoldNF, k_max: usize, seed: u64) -> Result<TypeReport> {
    let big_n = m.big_n();
    let d = m.d();
    let mut ranks = Vec::new();
    let mut verdict = FiniteType::Inconclusive;
    let mut exact_minor = None;
    let mut deficient_at_bound = false;
    for k in 1..=k_max {
        let v = segre_map(m, k)?;
        let rep = generic_rank(&v, RankMode::Symbolic, seed);
        let rung = RungRank { k, rank: rep.rank, deficiency: rep.deficiency.clone(), certificate: rep.certificate.clone() };
        ranks.push(rung);
        if k == d + 1 {
            deficient_at_bound = matches!(rep.deficiency, Deficiency::Certified { .. }) && rep.rank < big_n;
        }
        if rep.rank == big_n {
            if k <= d + 1 {
                exact_minor = symbolic_full_minor(&v, k, rep.certificate.as_ref());
                if exact_minor.is_some() {
                    verdict = FiniteType::Yes { k1: k };
                }
            }
            break;
        }
    }
    if verdict == FiniteType::Inconclusive && deficient_at_bound {
        verdict = FiniteType::NoUpTo { k: ranks.len() };
    }
    let rank_point = match verdict {
        FiniteType::Yes { k1 } => find_rank_point(m, k1, seed)?,
        _ => None,
    };
    Ok(TypeReport { verdict, ranks, exact_minor, rank_point })
}
