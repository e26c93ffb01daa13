use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::geometry::GenericSubmanifoldNF;
use crate::ideal::{staircase_codim, StaircaseReport};
use crate::mapping::FormalMapNF;
use crate::multi::MultiIndex;
use crate::series::Series;
use crate::tuple::SeriesTuple;

/// `Q̄′(χ′, z′, 0) = Σ_α Q̄′_α(z′) χ′^α` and `Q̄′(χ′, z′, w′) − Q̄′(χ′, z′, 0) = P(χ′, z′, w′) w′`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionExpansion {
    pub alphas: Vec<MultiIndex>,
    /// `Q̄′_α(z′)`, `d′` components in `n′` variables.
    pub coeffs: Vec<SeriesTuple>,
    /// `Q̄′_α(F(Z))` in the source variables.
    pub composed: Vec<SeriesTuple>,
    /// `P[j][l]` in the slots `(χ′, z′, w′)`.
    pub remainder: Vec<Vec<Series>>,
}

fn target_dims(target: &GenericSubmanifoldNF, h: &FormalMapNF) -> Result<()> {
    if h.target_dims() != (target.n(), target.d()) {
        return Err(Error::Dimension(alloc::format!(
            "map lands in C^{}+{} but the target has n = {}, d = {}",
            h.target_dims().0,
            h.target_dims().1,
            target.n(),
            target.d()
        )));
    }
    Ok(())
}

/// `Q̄′_α(z′)` for one multi-index, `d′` components in `n′` variables.
pub(crate) fn qbar_coeff(target: &GenericSubmanifoldNF, alpha: &MultiIndex) -> SeriesTuple {
    let n = target.n();
    let d = target.d();
    let slot1: Vec<usize> = (0..n).collect();
    let slot3: Vec<usize> = (2 * n..2 * n + d).collect();
    let to_z: Vec<usize> = (0..2 * n + d).map(|i| if (n..2 * n).contains(&i) { i - n } else { 0 }).collect();
    let comps = target
        .q_bar()
        .iter()
        .map(|q| q.set_zero(&slot3).coeff_in(&slot1, &alpha.0).remap(n, &to_z))
        .collect();
    SeriesTuple::new(comps).expect("shared variables").with_nvars(n)
}

pub fn expand_reflection(target: &GenericSubmanifoldNF, h: &FormalMapNF, alpha_bound: u32) -> Result<ReflectionExpansion> {
    target_dims(target, h)?;
    let n = target.n();
    let d = target.d();
    let alphas = MultiIndex::up_to_degree(n, alpha_bound);
    let mut coeffs = Vec::with_capacity(alphas.len());
    let mut composed = Vec::with_capacity(alphas.len());
    for a in &alphas {
        let c = qbar_coeff(target, a);
        composed.push(c.compose(h.f())?.with_nvars(h.f().nvars()));
        coeffs.push(c);
    }

    let nv = 2 * n + d;
    let slot3: Vec<usize> = (2 * n..nv).collect();
    let mut remainder = Vec::with_capacity(d);
    for q in target.q_bar().iter() {
        let mut row: Vec<Series> = (0..d).map(|_| Series::zero(nv, q.prec().saturating_sub(1))).collect();
        for (m, c) in q.terms() {
            let Some(l) = slot3.iter().rposition(|&v| m.0[v] > 0) else { continue };
            let mut e = m.clone();
            e.0[slot3[l]] -= 1;
            row[l].add_term(e, c.clone());
        }
        remainder.push(row);
    }
    Ok(ReflectionExpansion { alphas, coeffs, composed, remainder })
}

/// `β! [χ^β] F̄(χ, 0)^α`, that is `L^β(F̄^α)(0)`.
pub(crate) fn jet_products(h: &FormalMapNF, betas: &[MultiIndex], alphas: &[MultiIndex]) -> Vec<Vec<C>> {
    let fbar = h.f_on_segre().bar_conjugate();
    let nn = fbar.nvars();
    let p = fbar.prec();
    alphas
        .iter()
        .map(|a| {
            let mut prod = Series::one(nn, p);
            for (i, &e) in a.0.iter().enumerate() {
                prod = &prod * &fbar[i].pow(e);
            }
            betas.iter().map(|b| prod.coeff(b) * C::from_rational(b.factorial().into())).collect()
        })
        .collect()
}

/// The smallest jet order for which the reflection generators cut out a point.
#[derive(Clone, Debug, PartialEq)]
pub struct PickedOrder {
    pub r: u32,
    /// `g_{β,l}(μ) = Σ_α Q̄′_{l,α}(μ) L^β(F̄^α)(0)` for `1 ≤ |β| ≤ r`, in `n′` variables.
    pub generators: SeriesTuple,
    pub staircase: StaircaseReport,
}

/// Reflection generators for all `1 ≤ |β| ≤ r`.
pub(crate) fn reflection_generators(target: &GenericSubmanifoldNF, h: &FormalMapNF, r: u32) -> SeriesTuple {
    let n2 = target.n();
    let betas: Vec<MultiIndex> = MultiIndex::up_to_degree(h.source_dims().0, r).into_iter().filter(|b| !b.is_zero()).collect();
    let alphas = MultiIndex::up_to_degree(n2, r);
    let c = jet_products(h, &betas, &alphas);
    let qa: Vec<SeriesTuple> = alphas.iter().map(|a| qbar_coeff(target, a)).collect();
    let p = target.prec();
    let mut gens = SeriesTuple::empty(n2);
    for (bi, _) in betas.iter().enumerate() {
        for l in 0..target.d() {
            let mut g = Series::zero(n2, p);
            for (ai, q) in qa.iter().enumerate() {
                if !c[ai][bi].is_zero() {
                    g = &g + &q[l].scale(&c[ai][bi]);
                }
            }
            gens.push(g);
        }
    }
    gens
}

/// Searches `r = 1..=bound` for a finite staircase of the reflection generators.
pub fn pick_r(target: &GenericSubmanifoldNF, h: &FormalMapNF, bound: u32, degree_bound: u32) -> Result<PickedOrder> {
    target_dims(target, h)?;
    let mut last = None;
    for r in 1..=bound {
        let generators = reflection_generators(target, h, r);
        let staircase = staircase_codim(&generators, degree_bound);
        if staircase.is_finite() {
            return Ok(PickedOrder { r, generators, staircase });
        }
        last = Some(staircase);
    }
    let corners = last.map(|s| s.corners.len()).unwrap_or(0);
    Err(Error::Hypothesis(alloc::format!(
        "reflection generators have no finite staircase for r ≤ {} ({} corners found); injectivity or essential finiteness is suspect",
        bound, corners
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> GenericSubmanifoldNF {
        let q = Series::from_terms(3, 8, [(alloc::vec![0, 0, 1], C::one()), (alloc::vec![1, 1, 0], C::gauss(0, 2))]);
        GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![q]).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_expansion() {
        let m = heis();
        let h = FormalMapNF::identity(1, 1, 8);
        let e = expand_reflection(&m, &h, 3).unwrap();
        assert_eq!(e.alphas.len(), 4);
        assert!(e.coeffs[0].is_zero());
        assert_eq!(e.coeffs[1][0], Series::from_terms(1, 7, [(alloc::vec![1], C::gauss(0, -2))]));
        assert_eq!(e.composed[1][0], Series::from_terms(2, 7, [(alloc::vec![1, 0], C::gauss(0, -2))]));
        assert!(e.coeffs[2].is_zero() && e.coeffs[3].is_zero());
        // w′ − 2iχ′z′: the remainder is the constant 1
        assert_eq!(e.remainder[0][0], Series::one(3, 7));
    }

    #[test]
    fn heisenberg_order_one() {
        let m = heis();
        let h = FormalMapNF::identity(1, 1, 8);
        let p = pick_r(&m, &h, 3, 6).unwrap();
        assert_eq!(p.r, 1);
        assert_eq!(p.generators[0], Series::from_terms(1, 8, [(alloc::vec![1], C::gauss(0, -2))]));
        assert_eq!(p.staircase.codim(), Some(1));
    }

    #[test]
    fn degenerate_pairing_fails() {
        let q = Series::var(3, 6, 2);
        let m = GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![q]).unwrap()).unwrap();
        let h = FormalMapNF::identity(1, 1, 6);
        assert!(matches!(pick_r(&m, &h, 3, 6), Err(Error::Hypothesis(_))));
    }
}
