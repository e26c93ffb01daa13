use alloc::vec::Vec;

use crate::error::Result;
use crate::ideal::{find_monomial_curve, staircase_codim, verify_curve, CurveWitness, StaircaseReport};
use crate::multi::MultiIndex;
use crate::tuple::SeriesTuple;

use super::field::cr_basis_defining;
use super::manifold::{DefiningData, GenericSubmanifoldNF};

/// `q̄_{jα}(z, 0)` for `1 ≤ |α| ≤ alpha_bound`, as series in `z` alone.
///
/// Here `Q̄_j(χ, z, w) = Σ_α q̄_{jα}(z, w) χ^α`.
pub fn essential_generators(m: &GenericSubmanifoldNF, alpha_bound: u32) -> SeriesTuple {
    let n = m.n();
    let d = m.d();
    let qbar = m.q_bar();
    let slot1: Vec<usize> = (0..n).collect();
    let slot3: Vec<usize> = (2 * n..2 * n + d).collect();
    // the χ-slot of Q̄ carries z
    let to_z: Vec<usize> = (0..2 * n + d).map(|i| if i >= n && i < 2 * n { i - n } else { 0 }).collect();
    let mut out = Vec::new();
    for alpha in MultiIndex::up_to_degree(n, alpha_bound) {
        if alpha.is_zero() {
            continue;
        }
        for q in qbar.iter() {
            let c = q.set_zero(&slot3).coeff_in(&slot1, &alpha.0);
            out.push(c.remap(n, &to_z));
        }
    }
    if out.is_empty() {
        return SeriesTuple::empty(n);
    }
    SeriesTuple::new(out).expect("shared variables")
}

/// `c_{lα}(Z) = X^α ρ_l(Z, ζ)|_{ζ=0}` for `|α| ≤ alpha_bound`, in the variables `Z`.
pub fn essential_generators_defining(dd: &DefiningData, alpha_bound: u32) -> Result<SeriesTuple> {
    let nn = dd.big_n();
    let xs: Vec<_> = cr_basis_defining(dd)?.iter().map(|l| l.at_z_zero()).collect();
    let zeta: Vec<usize> = (nn..2 * nn).collect();
    let keep: Vec<usize> = (0..2 * nn).map(|i| if i < nn { i } else { 0 }).collect();
    let mut out = Vec::new();
    for alpha in MultiIndex::up_to_degree(xs.len(), alpha_bound) {
        for rho in dd.rho().iter() {
            let mut g = rho.clone();
            for (j, x) in xs.iter().enumerate().rev() {
                g = x.apply_pow(&g, alpha.0[j]);
            }
            out.push(g.set_zero(&zeta).remap(nn, &keep));
        }
    }
    SeriesTuple::new(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EssFinReport {
    pub staircase: StaircaseReport,
    pub generators: SeriesTuple,
    pub curve: Option<CurveWitness>,
}

impl EssFinReport {
    pub fn is_finite(&self) -> bool {
        self.staircase.is_finite()
    }
}

/// Staircase of the essential ideal, with a curve search when it stays undetermined.
pub fn essential_finiteness_test(generators: SeriesTuple, degree_bound: u32, curve_exponents: u32, curve_breadth: usize) -> EssFinReport {
    let staircase = staircase_codim(&generators, degree_bound);
    let curve = if staircase.is_finite() {
        None
    } else {
        find_monomial_curve(&generators, curve_exponents, curve_breadth)
            .filter(|w| verify_curve(&generators, w, w.order))
    };
    EssFinReport { staircase, generators, curve }
}

/// Convenience wrapper on a normal form.
pub fn essential_finiteness_nf(m: &GenericSubmanifoldNF, alpha_bound: u32, degree_bound: u32) -> EssFinReport {
    essential_finiteness_test(essential_generators(m, alpha_bound), degree_bound, 4, 4)
}
