use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{FormalVectorField, GenericSubmanifoldNF};
use crate::ideal::{find_monomial_curve, staircase_codim, verify_curve, CurveWitness, StaircaseReport};
use crate::linalg::{self, SparseVec};
use crate::multi::MultiIndex;
use crate::rank::{generic_rank, series_det, MinorCertificate, RankMode};
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::map::FormalMapNF;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMapReport {
    pub staircase: StaircaseReport,
    pub curve: Option<CurveWitness>,
}

impl FiniteMapReport {
    pub fn codim(&self) -> Option<usize> {
        self.staircase.codim()
    }
}

/// Codimension of the ideal generated by the components of `k`.
pub fn finite_map_test(k: &SeriesTuple, degree_bound: u32) -> Result<FiniteMapReport> {
    if !k.has_zero_constants() {
        return Err(Error::Precondition("map components must vanish at the origin".into()));
    }
    let staircase = staircase_codim(k, degree_bound);
    let curve = if staircase.is_finite() {
        None
    } else {
        find_monomial_curve(k, 4, 4).filter(|w| verify_curve(k, w, w.order))
    };
    Ok(FiniteMapReport { staircase, curve })
}

/// A nonzero `h` of degree `≤ degree_bound` with `h(0) = 0` and `h ∘ k ≡ 0` through precision.
///
/// Monomials `h^β` whose image `k^β` vanishes through precision are left out of
/// the ansatz, since any such relation would be a truncation artifact.
pub fn find_relation(k: &SeriesTuple, degree_bound: u32) -> Option<Series> {
    let m = k.len();
    let p = k.prec();
    let betas: Vec<MultiIndex> = MultiIndex::up_to_degree(m, degree_bound).into_iter().filter(|b| !b.is_zero()).collect();
    let mut cols: Vec<(MultiIndex, Series)> = Vec::new();
    for b in betas {
        let mut img = Series::one(k.nvars(), p);
        for (i, &e) in b.0.iter().enumerate() {
            if e > 0 {
                img = &img * &k[i].pow(e);
            }
        }
        if !img.is_zero() {
            cols.push((b, img));
        }
    }
    let mut row_of: alloc::collections::BTreeMap<MultiIndex, usize> = alloc::collections::BTreeMap::new();
    let mut rows: Vec<SparseVec> = Vec::new();
    for (c, (_, img)) in cols.iter().enumerate() {
        for (mono, coeff) in img.terms() {
            let r = *row_of.entry(mono.clone()).or_insert_with(|| {
                rows.push(SparseVec::new());
                rows.len() - 1
            });
            rows[r].insert(c, coeff.clone());
        }
    }
    let null = linalg::nullspace(&rows, cols.len());
    let v = null.into_iter().next()?;
    let mut h = Series::zero(m, p);
    for ((b, _), c) in cols.iter().zip(v) {
        h.add_term(b.clone(), c);
    }
    let ok = h.compose(k).map(|r| r.is_zero()).unwrap_or(false);
    if ok {
        Some(h)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Injectivity {
    /// `z ↦ F(z, 0)` has generic rank `n′`.
    Rank(MinorCertificate),
    /// `z ↦ F(z, 0)` is a finite map.
    Finite { codim: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SegreHomReport {
    Injective(Injectivity),
    NotInjective { relation: Series, order: u32 },
    Inconclusive { rank: usize, relation_degree: u32 },
}

/// Whether the Segre homomorphism of `H` is injective, judged from `z ↦ F(z, 0)`.
pub fn segre_injectivity_test(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h: &FormalMapNF,
    relation_degree: u32,
    seed: u64,
) -> Result<SegreHomReport> {
    if h.source_dims() != (m.n(), m.d()) || h.target_dims() != (target.n(), target.d()) {
        return Err(Error::Dimension("map and manifolds disagree".into()));
    }
    let fz = h.f_on_segre();
    let n_t = target.n();
    if n_t == 0 {
        return Ok(SegreHomReport::Injective(Injectivity::Finite { codim: 1 }));
    }
    let rep = generic_rank(&fz, RankMode::Sample, seed);
    if rep.rank == n_t {
        if let Some(c) = rep.certificate {
            return Ok(SegreHomReport::Injective(Injectivity::Rank(c)));
        }
    }
    let fin = finite_map_test(&fz, fz.prec())?;
    if let Some(codim) = fin.codim() {
        return Ok(SegreHomReport::Injective(Injectivity::Finite { codim }));
    }
    if let Some(relation) = find_relation(&fz, relation_degree) {
        return Ok(SegreHomReport::NotInjective { relation, order: fz.prec() });
    }
    Ok(SegreHomReport::Inconclusive { rank: rep.rank, relation_degree })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub degenerate: bool,
    /// `det(∂F_i/∂z_j)(z, 0)`.
    pub determinant: Series,
}

/// Whether `det(∂F_i/∂z_j)(z, 0) ≡ 0` through precision.
pub fn total_degeneracy_test(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h: &FormalMapNF,
) -> Result<DegeneracyReport> {
    if m.n() != target.n() || h.target_dims().0 != m.n() || h.source_dims().0 != m.n() {
        return Err(Error::Dimension(format!("needs n = n′, got {} and {}", m.n(), target.n())));
    }
    let jac = h.f_on_segre().jacobian();
    let determinant = if jac.is_empty() { Series::one(m.n(), h.prec()) } else { series_det(&jac) };
    Ok(DegeneracyReport { degenerate: determinant.is_zero(), determinant })
}

/// A nonzero field `Σ a_i ∂/∂x_i` with polynomial coefficients of degree `≤ degree_bound`
/// annihilating every component of `f` through `prec − 1`; the lowest degree found is returned.
pub fn kernel_vector_field(f: &SeriesTuple, degree_bound: u32) -> Option<FormalVectorField> {
    let nv = f.nvars();
    let p = f.prec().saturating_sub(1);
    let jac = f.jacobian();
    for e in 0..=degree_bound {
        let monos = MultiIndex::up_to_degree(nv, e);
        let ncols = nv * monos.len();
        let mut row_of: alloc::collections::BTreeMap<(usize, MultiIndex), usize> = alloc::collections::BTreeMap::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        for (k, row) in jac.iter().enumerate() {
            for i in 0..nv {
                for (mi, mu) in monos.iter().enumerate() {
                    let col = i * monos.len() + mi;
                    for (t, c) in row[i].truncate(p).terms() {
                        let prod = t.add(mu);
                        if prod.degree() > p {
                            continue;
                        }
                        let r = *row_of.entry((k, prod)).or_insert_with(|| {
                            rows.push(SparseVec::new());
                            rows.len() - 1
                        });
                        rows[r].insert(col, c.clone());
                    }
                }
            }
        }
        let null = linalg::nullspace(&rows, ncols);
        if let Some(v) = null.into_iter().next() {
            let coeffs: Vec<Series> = (0..nv)
                .map(|i| {
                    let mut a = Series::zero(nv, p);
                    for (mi, mu) in monos.iter().enumerate() {
                        a.add_term(mu.clone(), v[i * monos.len() + mi].clone());
                    }
                    a
                })
                .collect();
            let field = FormalVectorField { coeffs };
            if f.iter().all(|s| field.apply(s).is_zero()) {
                return Some(field);
            }
        }
    }
    None
}
