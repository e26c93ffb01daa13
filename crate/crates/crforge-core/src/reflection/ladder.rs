use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{finite_type_test, segre_chain, tangential_frame_nf, FiniteType, FormalVectorField, GenericSubmanifoldNF};
use crate::mapping::{check_sends, FormalMapNF};
use crate::multi::MultiIndex;
use crate::poly::PolyInX;
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::identity::{ambient_polynomial, reflection_identities, ReflectionIdentity, ReflectionOptions};
use super::leibniz::derived_polynomial;
use super::separation::{separation_order, Separation};

/// The right-inverse step that turns convergence along `v^{2k₁}` into convergence of `H`.
pub const RIGHT_INVERSE_NOTE: &str =
    "analytic right inverse of v^(2k1) through a full-rank point is not computed; formal series cannot certify convergence";

/// `H` together with the data reused on every rung.
struct MapData<'a> {
    h: &'a FormalMapNF,
    identity: ReflectionIdentity,
    ambient: Vec<PolyInX>,
}

impl<'a> MapData<'a> {
    fn new(m: &GenericSubmanifoldNF, target: &GenericSubmanifoldNF, h: &'a FormalMapNF, opts: &ReflectionOptions) -> Result<Self> {
        let identity = reflection_identities(m, target, h, opts)?;
        let ambient = (0..identity.polys.len()).map(|j| ambient_polynomial(m, &identity, h, j)).collect::<Result<_>>()?;
        Ok(MapData { h, identity, ambient })
    }

    /// `∂^α H_j` in the ambient ring.
    fn derived(&self, m: &GenericSubmanifoldNF, j: usize, alpha: &MultiIndex) -> Series {
        let nn = m.big_n();
        let holo: Vec<usize> = (0..nn).collect();
        self.h.h()[j].derive_multi(&alpha.0).remap(2 * nn, &holo)
    }

    /// The polynomial of the rung along the chain, and the root it annihilates.
    fn rung_polynomial(
        &self,
        m: &GenericSubmanifoldNF,
        frame: &[FormalVectorField],
        chain: &SeriesTuple,
        j: usize,
        alpha: &MultiIndex,
    ) -> Result<(PolyInX, Series, u32)> {
        if alpha.is_zero() {
            let along = self.ambient[j].compose_coeffs(chain)?;
            let root = self.derived(m, j, alpha).compose(chain)?;
            let value = along.eval(&root);
            if !value.is_zero() {
                return Err(Error::Shape("reflection identity fails along the Segre chain".into()));
            }
            return Ok((along, root, value.prec()));
        }
        let h = self.derived(m, j, &MultiIndex::zero(alpha.len()));
        let d = derived_polynomial(&self.ambient[j], &h, frame, chain, alpha)?;
        Ok((d.along, d.root, d.order))
    }
}

fn rung_indices(nn: usize, alpha_max: u32) -> Vec<MultiIndex> {
    MultiIndex::up_to_degree(nn, alpha_max)
}

/// One verified identity on the convergence ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub k: usize,
    pub alpha: MultiIndex,
    pub component: usize,
    /// `R(X, v^k, v̄^{k-1})` with coefficients in the chain variables.
    pub polynomial: PolyInX,
    pub degree: usize,
    /// Order through which `R(∂^αH_j ∘ v^k, …) ≡ 0` holds.
    pub order: u32,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceLedger {
    pub r: u32,
    pub finite_type: FiniteType,
    pub entries: Vec<LedgerEntry>,
    pub out_of_scope: &'static str,
}

impl ConvergenceLedger {
    /// Re-evaluates every recorded identity at the given map.
    pub fn recheck(&self, m: &GenericSubmanifoldNF, h: &FormalMapNF) -> Result<bool> {
        let nn = m.big_n();
        let holo: Vec<usize> = (0..nn).collect();
        for e in &self.entries {
            let chain = segre_chain(m, e.k)?;
            let root = h.h()[e.component].derive_multi(&e.alpha.0).remap(2 * nn, &holo).compose(&chain)?;
            if !e.polynomial.eval(&root).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn convergence_ledger(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h: &FormalMapNF,
    k_max: usize,
    alpha_max: u32,
    opts: &ReflectionOptions,
) -> Result<ConvergenceLedger> {
    if !check_sends(m, target, h)?.sends {
        return Err(Error::Precondition("map does not send M into M′ through precision".into()));
    }
    let data = MapData::new(m, target, h, opts)?;
    let frame = tangential_frame_nf(m)?;
    let nn = m.big_n();
    let mut entries = Vec::new();
    for k in 1..=k_max {
        let chain = segre_chain(m, k)?;
        for alpha in rung_indices(nn, alpha_max) {
            for j in 0..data.ambient.len() {
                let (polynomial, _, order) = data.rung_polynomial(m, &frame, &chain, j, &alpha)?;
                let nontrivial = polynomial.coeffs().iter().any(|c| !c.is_zero());
                entries.push(LedgerEntry { k, alpha: alpha.clone(), component: j, degree: polynomial.normalized().deg(), polynomial, order, nontrivial });
            }
        }
    }
    let finite_type = finite_type_test(m, k_max.max(1), opts.seed)?.verdict;
    Ok(ConvergenceLedger { r: data.identity.r, finite_type, entries, out_of_scope: RIGHT_INVERSE_NOTE })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RungVerdict {
    Agree,
    /// The two derivatives first differ in this degree along the chain.
    Disagree { degree: u32 },
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rung {
    pub k: usize,
    pub alpha: MultiIndex,
    pub component: usize,
    pub verdict: RungVerdict,
    pub separation: Option<Separation>,
    /// Both maps give the same polynomial along the chain.
    pub same_polynomial: bool,
    /// `K(k, α) = |α| + m`: jets of this order fix the rung.
    pub jet_order: Option<u32>,
    /// The rung follows from the jet agreement and the separation order alone.
    pub determined_by_jets: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// Finite type reached with agreement on `v^{k₁}`: the maps coincide through `order`.
    Identical { order: u32 },
    Differ { k: usize, alpha: MultiIndex, component: usize },
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminationReport {
    pub k_jets: u32,
    /// Largest `K′ ≤ K` with `∂^βH¹(0) = ∂^βH²(0)` for `|β| ≤ K′`; `None` if the linear parts already differ.
    pub jets_agree_through: Option<u32>,
    pub rungs: Vec<Rung>,
    pub first_disagreement: Option<(usize, MultiIndex, usize)>,
    pub conclusion: Conclusion,
}

fn first_difference(a: &Series, b: &Series) -> Option<u32> {
    let diff = a - b;
    diff.order()
}

fn jets_agree_through(h1: &FormalMapNF, h2: &FormalMapNF, k: u32) -> Option<u32> {
    let n = h1.source_dims().0 + h1.source_dims().1;
    let comps = h1.h().len();
    let mut best = None;
    for order in 0..=k {
        for beta in MultiIndex::of_degree(n, order) {
            for j in 0..comps {
                if h1.jet(j, &beta) != h2.jet(j, &beta) {
                    return best;
                }
            }
        }
        best = Some(order);
    }
    best
}

#[allow(clippy::too_many_arguments)]
pub fn chain_agreement(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h1: &FormalMapNF,
    h2: &FormalMapNF,
    k_jets: u32,
    k_max: usize,
    alpha_max: u32,
    opts: &ReflectionOptions,
) -> Result<DeterminationReport> {
    for (name, h) in [("H1", h1), ("H2", h2)] {
        if !check_sends(m, target, h)?.sends {
            return Err(Error::Precondition(alloc::format!("{} does not send M into M′ through precision", name)));
        }
    }
    let d1 = MapData::new(m, target, h1, opts)?;
    let d2 = MapData::new(m, target, h2, opts)?;
    let frame = tangential_frame_nf(m)?;
    let nn = m.big_n();
    let jets = jets_agree_through(h1, h2, k_jets);
    let mut rungs = Vec::new();
    let mut first = None;
    for k in 1..=k_max {
        let chain = segre_chain(m, k)?;
        for alpha in rung_indices(nn, alpha_max) {
            for j in 0..d1.ambient.len() {
                let rung = match (
                    d1.rung_polynomial(m, &frame, &chain, j, &alpha),
                    d2.rung_polynomial(m, &frame, &chain, j, &alpha),
                ) {
                    (Ok((p1, root1, _)), Ok((p2, root2, _))) => {
                        let sep = separation_order(&p1);
                        let jet_order = sep.m().map(|mm| alpha.degree() + mm);
                        let shared_root = p1.eval(&root2).is_zero();
                        let determined = shared_root
                            && jet_order.map(|o| jets.map(|a| a >= o).unwrap_or(false)).unwrap_or(false);
                        let verdict = match first_difference(&root1, &root2) {
                            None => RungVerdict::Agree,
                            Some(degree) if determined => RungVerdict::Inconclusive(alloc::format!(
                                "roots forced equal by the separation order differ in degree {}",
                                degree
                            )),
                            Some(degree) => RungVerdict::Disagree { degree },
                        };
                        Rung {
                            k,
                            alpha: alpha.clone(),
                            component: j,
                            verdict,
                            separation: Some(sep),
                            same_polynomial: p1 == p2,
                            jet_order,
                            determined_by_jets: determined,
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => Rung {
                        k,
                        alpha: alpha.clone(),
                        component: j,
                        verdict: RungVerdict::Inconclusive(alloc::format!("{}", e)),
                        separation: None,
                        same_polynomial: false,
                        jet_order: None,
                        determined_by_jets: false,
                    },
                };
                if first.is_none() && matches!(rung.verdict, RungVerdict::Disagree { .. }) {
                    first = Some((k, alpha.clone(), j));
                }
                rungs.push(rung);
            }
        }
    }

    let conclusion = if let Some((k, alpha, component)) = first.clone() {
        Conclusion::Differ { k, alpha, component }
    } else {
        match finite_type_test(m, k_max.max(1), opts.seed)?.verdict {
            FiniteType::Yes { k1 } if k1 <= k_max => {
                let zero = MultiIndex::zero(nn);
                let reached = rungs
                    .iter()
                    .filter(|r| r.k == k1 && r.alpha == zero)
                    .all(|r| r.verdict == RungVerdict::Agree);
                let a = h1.h();
                let b = h2.h();
                if reached && a == b {
                    Conclusion::Identical { order: a.prec().min(b.prec()) }
                } else {
                    Conclusion::Open
                }
            }
            _ => Conclusion::Open,
        }
    };
    Ok(DeterminationReport { k_jets, jets_agree_through: jets, rungs, first_disagreement: first, conclusion })
}
