use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::geometry::{cr_basis, GenericSubmanifoldNF};
use crate::ideal::{eliminate_pair, monicize_system};
use crate::mapping::{check_sends, FormalMapNF};
use crate::multi::MultiIndex;
use crate::poly::PolyInX;
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::expand::pick_r;
use super::system::{build_reflection_system, ReflectionSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionOptions {
    /// Largest jet order tried by [`pick_r`].
    pub r_bound: u32,
    /// Degree bound for the staircase of the reflection generators.
    pub degree_bound: u32,
    /// Cofactor degree used to certify each monic relation.
    pub cofactor_degree: u32,
    /// Seed for the sampled rank tests used by the ladders.
    pub seed: u64,
}

impl Default for ReflectionOptions {
    fn default() -> Self {
        ReflectionOptions { r_bound: 3, degree_bound: 8, cofactor_degree: 8, seed: 17 }
    }
}

/// Monic polynomials `P_j(X; Z, ζ, a′)` with `P_j(H_j(Z); Z, ζ, (∂^δH̄(ζ) − ∂^δH̄(0))_{|δ|≤r}) ∈ I(M)`.
///
/// Ring layout: `X`, then `Z` (`N`), then `ζ` (`N`), then `a′_{δ,m}` for each `δ`
/// in `deltas` and `m < N′`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionIdentity {
    pub r: u32,
    pub big_n: usize,
    pub big_n2: usize,
    pub deltas: Vec<MultiIndex>,
    pub polys: Vec<PolyInX>,
    /// `(j, β, ∂^βH_j(0))` for `|β| ≤ r`.
    pub jets: Vec<(usize, MultiIndex, C)>,
}

impl ReflectionIdentity {
    pub const X: usize = 0;
    pub fn z_var(&self, i: usize) -> usize {
        1 + i
    }
    pub fn zeta_var(&self, i: usize) -> usize {
        1 + self.big_n + i
    }
    pub fn a_var(&self, delta: usize, m: usize) -> usize {
        1 + 2 * self.big_n + delta * self.big_n2 + m
    }
    pub fn nvars(&self) -> usize {
        1 + 2 * self.big_n + self.deltas.len() * self.big_n2
    }
    pub fn degree(&self, j: usize) -> usize {
        self.polys[j].deg()
    }
    /// `c^{jk}`.
    pub fn coeff(&self, j: usize, k: usize) -> &Series {
        self.polys[j].coeff(k)
    }
}

/// `L^γ h = Σ_δ e_{γδ} ∂^δ h` for `h` a function of `ζ` only; one map `δ ↦ e_{γδ}` per `γ`.
pub(crate) fn cr_expansion(m: &GenericSubmanifoldNF, gammas: &[MultiIndex]) -> Vec<BTreeMap<MultiIndex, Series>> {
    let nn = m.big_n();
    let amb = 2 * nn;
    let fields = cr_basis(m);
    let mut memo: BTreeMap<MultiIndex, BTreeMap<MultiIndex, Series>> = BTreeMap::new();
    let mut base = BTreeMap::new();
    base.insert(MultiIndex::zero(nn), Series::one(amb, m.prec()));
    memo.insert(MultiIndex::zero(m.n()), base);
    let mut order: Vec<MultiIndex> = gammas.to_vec();
    order.sort();
    for g in &order {
        if memo.contains_key(g) {
            continue;
        }
        let j = g.0.iter().rposition(|&e| e > 0).unwrap();
        let prev = memo[&g.checked_sub(&MultiIndex::unit(m.n(), j)).unwrap()].clone();
        let l = &fields[j];
        let mut next: BTreeMap<MultiIndex, Series> = BTreeMap::new();
        let add = |k: MultiIndex, s: Series, next: &mut BTreeMap<MultiIndex, Series>| {
            if s.is_zero() {
                return;
            }
            let e = next.remove(&k).map(|o| &o + &s).unwrap_or(s);
            next.insert(k, e);
        };
        for (d, e) in &prev {
            add(d.clone(), l.apply(e), &mut next);
            for k in 0..nn {
                let c = &l.coeffs[nn + k];
                if !c.is_zero() {
                    add(d.add(&MultiIndex::unit(nn, k)), e * c, &mut next);
                }
            }
        }
        memo.insert(g.clone(), next);
    }
    gammas.iter().map(|g| memo[g].clone()).collect()
}

/// Expressions for the system variables `(a, b)` in the identity ring.
fn jet_substitution(
    m: &GenericSubmanifoldNF,
    h: &FormalMapNF,
    sys: &ReflectionSystem,
    shape: &ReflectionIdentity,
) -> Result<SeriesTuple> {
    let nn = m.big_n();
    let nv = shape.nvars();
    let emb: Vec<usize> = (0..2 * nn).map(|i| 1 + i).collect();
    let expansion = cr_expansion(m, &sys.gammas);
    let delta_pos: BTreeMap<&MultiIndex, usize> = shape.deltas.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut out: Vec<Series> = (0..sys.p()).map(|_| Series::zero(nv, m.prec())).collect();
    for (gi, eg) in expansion.iter().enumerate() {
        for comp in 0..shape.big_n2 {
            let mut acc = Series::zero(nv, m.prec());
            for (delta, e) in eg {
                let di = *delta_pos
                    .get(delta)
                    .ok_or_else(|| Error::Shape("CR expansion left the jet range".into()))?;
                let jet = h.jet(comp, delta).conj();
                let lin = &Series::var(nv, e.prec(), shape.a_var(di, comp)) + &Series::constant(nv, e.prec(), jet);
                acc = &acc + &(&e.remap(nv, &emb) * &lin);
            }
            let var = if comp < sys.n2 {
                acc = &acc - &Series::constant(nv, acc.prec(), sys.ell[gi][comp].clone());
                sys.a_var(gi, comp)
            } else {
                sys.b_var(gi, comp - sys.n2)
            };
            out[var] = acc;
        }
    }
    SeriesTuple::new(out)
}

/// Runs the pipeline: order selection, reflection system, monic relations, elimination for `G`,
/// conversion to coordinate derivatives, and verification.
pub fn reflection_identities(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h: &FormalMapNF,
    opts: &ReflectionOptions,
) -> Result<ReflectionIdentity> {
    if !check_sends(m, target, h)?.sends {
        return Err(Error::Precondition("map does not send M into M′ through precision".into()));
    }
    let picked = pick_r(target, h, opts.r_bound, opts.degree_bound)?;
    let sys = build_reflection_system(m, target, h, picked.r)?;
    let p = sys.p();
    let n2 = sys.n2;
    let relations = monicize_system(&sys.rows, p, n2, opts.cofactor_degree)?;

    // G_l from Y − Q′_l(X, a_0, b_0), eliminating each X_k
    let ring = p + n2 + 1;
    let y = ring - 1;
    let u: Vec<usize> = (0..p).collect();
    let prec = sys.rows.prec();
    let var = |i: usize| Series::var(ring, prec, i);
    let mut inner: Vec<Series> = (0..n2).map(|i| var(sys.x_var(i))).collect();
    inner.extend((0..n2).map(|i| var(sys.a_var(0, i))));
    inner.extend((0..sys.d2).map(|l| var(sys.b_var(0, l))));
    let qp = target.q().compose(&SeriesTuple::new(inner)?)?;
    let mut g_polys = Vec::with_capacity(sys.d2);
    for q in qp.iter() {
        let mut cur = &var(y) - q;
        let mut degree = 1u32;
        for rel in &relations {
            let p1 = rel.poly.map(|c| c.extend_vars(ring));
            let e = eliminate_pair(&p1, rel.var, &cur, y, &u)?;
            cur = e.r;
            degree = e.degree;
        }
        let poly = PolyInX::from_series(&cur, y, degree as usize)?;
        if !poly.is_monic() {
            return Err(Error::NotMonic);
        }
        g_polys.push(poly);
    }

    let nn = m.big_n();
    let deltas = MultiIndex::up_to_degree(nn, picked.r);
    let hh = h.h();
    let mut jets = Vec::new();
    for j in 0..hh.len() {
        for b in &deltas {
            jets.push((j, b.clone(), h.jet(j, b)));
        }
    }
    let mut out = ReflectionIdentity { r: picked.r, big_n: nn, big_n2: hh.len(), deltas, polys: Vec::new(), jets };
    let subs = jet_substitution(m, h, &sys, &out)?;
    let nv = out.nvars();
    let to_u = |ring: usize| -> Vec<usize> { (0..ring).map(|i| if i < p { i } else { 0 }).collect() };
    let convert = |poly: &PolyInX, ring: usize| -> Result<PolyInX> {
        let map = to_u(ring);
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|c| c.remap(p, &map).compose(&subs))
            .collect::<Result<Vec<_>>>()?;
        let mut coeffs: Vec<Series> = coeffs.into_iter().map(|c| c.extend_vars(nv)).collect();
        let lead_prec = coeffs.last().map(|c| c.prec()).unwrap_or(0);
        *coeffs.last_mut().unwrap() = Series::one(nv, lead_prec);
        PolyInX::new(coeffs)
    };
    for rel in &relations {
        out.polys.push(convert(&rel.poly, p + n2)?);
    }
    for g in &g_polys {
        out.polys.push(convert(g, ring)?);
    }
    if !verify_reflection(m, &out, h)? {
        return Err(Error::Shape("reflection identity failed its own verification".into()));
    }
    Ok(out)
}

/// Substitution `X ↦ H_j(Z)`, `a′_δ ↦ ∂^δH̄(ζ) − ∂^δH̄(0)` into the ambient ring of `M`.
pub(crate) fn identity_substitution(
    m: &GenericSubmanifoldNF,
    identity: &ReflectionIdentity,
    h: &FormalMapNF,
    j: usize,
) -> Result<SeriesTuple> {
    let nn = m.big_n();
    let amb = 2 * nn;
    let hh = h.h();
    let holo: Vec<usize> = (0..nn).collect();
    let anti: Vec<usize> = (nn..amb).collect();
    let prec = hh.prec().min(m.prec());
    let mut subs = Vec::with_capacity(identity.nvars());
    subs.push(hh[j].remap(amb, &holo));
    for i in 0..amb {
        subs.push(Series::var(amb, prec, i));
    }
    for delta in &identity.deltas {
        let mut beta = alloc::vec![0u32; nn];
        beta.extend(delta.0.iter().copied());
        for comp in hh.iter() {
            let d = comp.bar_conjugate().remap(amb, &anti).derive_multi(&beta);
            let c0 = d.constant_term();
            subs.push(&d - &Series::constant(amb, d.prec(), c0));
        }
    }
    SeriesTuple::new(subs)
}

/// `P_j(X, Z, ζ, ∂H̄(ζ) − ∂H̄(0))` with coefficients in the ambient ring of `M`.
pub fn ambient_polynomial(m: &GenericSubmanifoldNF, identity: &ReflectionIdentity, h: &FormalMapNF, j: usize) -> Result<PolyInX> {
    let subs = identity_substitution(m, identity, h, j)?;
    identity.polys[j].compose_coeffs(&subs)
}

/// Whether every `P_j(H_j(Z); Z, ζ, ∂H̄(ζ) − ∂H̄(0))` reduces to zero modulo `I(M)`.
pub fn verify_reflection(m: &GenericSubmanifoldNF, identity: &ReflectionIdentity, h: &FormalMapNF) -> Result<bool> {
    if h.h().len() != identity.polys.len() || identity.big_n != m.big_n() {
        return Err(Error::Dimension("identity does not match the map".into()));
    }
    for (j, poly) in identity.polys.iter().enumerate() {
        let subs = identity_substitution(m, identity, h, j)?;
        let s = poly.to_series(ReflectionIdentity::X).compose(&subs)?;
        if !m.reduce_mod_m(&s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> GenericSubmanifoldNF {
        let q = Series::from_terms(3, 8, [(alloc::vec![0, 0, 1], C::one()), (alloc::vec![1, 1, 0], C::gauss(0, 2))]);
        GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![q]).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_cr_expansion() {
        let m = heis();
        let e = cr_expansion(&m, &[MultiIndex::from_slice(&[1]), MultiIndex::from_slice(&[2])]);
        // L = ∂χ − 2iz ∂τ
        assert_eq!(e[0].len(), 2);
        assert_eq!(e[0][&MultiIndex::from_slice(&[1, 0])], Series::one(4, 8));
        assert_eq!(e[0][&MultiIndex::from_slice(&[0, 1])], Series::from_terms(4, 7, [(alloc::vec![1, 0, 0, 0], C::gauss(0, -2))]));
        // L² = ∂χ² − 4iz ∂χ∂τ − 4z² ∂τ²
        assert_eq!(e[1][&MultiIndex::from_slice(&[1, 1])], Series::from_terms(4, 7, [(alloc::vec![1, 0, 0, 0], C::gauss(0, -4))]));
        assert_eq!(e[1][&MultiIndex::from_slice(&[0, 2])], Series::from_terms(4, 6, [(alloc::vec![2, 0, 0, 0], C::int(-4))]));
    }

    #[test]
    fn heisenberg_identity_map() {
        let m = heis();
        let h = FormalMapNF::identity(1, 1, 8);
        let id = reflection_identities(&m, &m, &h, &ReflectionOptions::default()).unwrap();
        assert_eq!(id.r, 1);
        assert_eq!(id.polys.len(), 2);
        assert!(id.polys.iter().all(|p| p.deg() == 1 && p.is_monic()));
        assert!(verify_reflection(&m, &id, &h).unwrap());
        let mut bad = id.clone();
        let c = bad.polys[0].coeff(0).clone();
        let mut e = alloc::vec![0u32; bad.nvars()];
        e[bad.z_var(0)] = 1;
        let shifted = &c + &Series::monomial(bad.nvars(), c.prec(), &e, C::int(1));
        let mut coeffs = bad.polys[0].coeffs().to_vec();
        coeffs[0] = shifted;
        bad.polys[0] = PolyInX::new(coeffs).unwrap();
        assert!(!verify_reflection(&m, &bad, &h).unwrap());
    }
}
