use alloc::format;
use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::multi::MultiIndex;
use crate::series::Series;
use crate::tuple::SeriesTuple;

use crate::geometry::GenericSubmanifoldNF;

/// `H = (F, G)` from `(z, w) ∈ C^n × C^d` to `(z′, w′) ∈ C^{n′} × C^{d′}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalMapNF {
    n: usize,
    d: usize,
    f: SeriesTuple,
    g: SeriesTuple,
}

impl FormalMapNF {
    pub fn new(n: usize, d: usize, f: SeriesTuple, g: SeriesTuple) -> Result<Self> {
        for t in [&f, &g] {
            if !t.is_empty() && t.nvars() != n + d {
                return Err(Error::VarCountMismatch { left: n + d, right: t.nvars() });
            }
        }
        let f = if f.is_empty() { SeriesTuple::empty(n + d) } else { f };
        let g = if g.is_empty() { SeriesTuple::empty(n + d) } else { g };
        for (i, s) in f.iter().chain(g.iter()).enumerate() {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstant { component: i });
            }
        }
        Ok(FormalMapNF { n, d, f, g })
    }

    pub fn identity(n: usize, d: usize, prec: u32) -> Self {
        let nv = n + d;
        let f = SeriesTuple::new((0..n).map(|i| Series::var(nv, prec, i)).collect()).unwrap();
        let g = SeriesTuple::new((n..nv).map(|i| Series::var(nv, prec, i)).collect()).unwrap();
        FormalMapNF { n, d, f: f.with_nvars(nv), g: g.with_nvars(nv) }
    }

    pub fn source_dims(&self) -> (usize, usize) {
        (self.n, self.d)
    }

    pub fn target_dims(&self) -> (usize, usize) {
        (self.f.len(), self.g.len())
    }

    pub fn f(&self) -> &SeriesTuple {
        &self.f
    }

    pub fn g(&self) -> &SeriesTuple {
        &self.g
    }

    /// `H = (F, G)` as one tuple.
    pub fn h(&self) -> SeriesTuple {
        self.f.concat(&self.g).expect("shared variables")
    }

    pub fn prec(&self) -> u32 {
        self.f.iter().chain(self.g.iter()).map(|s| s.prec()).min().unwrap_or(u32::MAX)
    }

    /// `∂^β H_j(0)`.
    pub fn jet(&self, j: usize, beta: &MultiIndex) -> C {
        let h = self.h();
        h[j].coeff(beta) * C::from_rational(beta.factorial().into())
    }

    /// All components truncated to `p`.
    pub fn truncate(&self, p: u32) -> Self {
        FormalMapNF { n: self.n, d: self.d, f: self.f.truncate(p), g: self.g.truncate(p) }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FormalMapNF) -> Result<Self> {
        let (n2, d2) = self.target_dims();
        if other.source_dims() != (n2, d2) {
            return Err(Error::Dimension(format!(
                "cannot compose a map into C^{}+{} with one from C^{}+{}",
                n2, d2, other.n, other.d
            )));
        }
        let h = self.h();
        let f = other.f.compose(&h)?.with_nvars(self.n + self.d);
        let g = other.g.compose(&h)?.with_nvars(self.n + self.d);
        FormalMapNF::new(self.n, self.d, f, g)
    }

    /// `z ↦ F(z, 0)`.
    pub fn f_on_segre(&self) -> SeriesTuple {
        let wv: Vec<usize> = (self.n..self.n + self.d).collect();
        let keep: Vec<usize> = (0..self.n + self.d).map(|i| if i < self.n { i } else { 0 }).collect();
        SeriesTuple::new(self.f.iter().map(|s| s.set_zero(&wv).remap(self.n, &keep)).collect())
            .unwrap()
            .with_nvars(self.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapCheckReport {
    pub sends: bool,
    pub order: u32,
    /// `Q̄′(F̄, F, G) − Ḡ` reduced modulo `I(M)`, in `(z, χ, τ)`.
    pub residuals: Vec<Series>,
}

/// Whether `H` sends `M` into `M′`: each `Q̄′_l(F̄(χ,τ), F(z,w), G(z,w)) − Ḡ_l(χ,τ)` lies in `I(M)`.
pub fn check_sends(m: &GenericSubmanifoldNF, target: &GenericSubmanifoldNF, h: &FormalMapNF) -> Result<MapCheckReport> {
    if h.source_dims() != (m.n(), m.d()) || h.target_dims() != (target.n(), target.d()) {
        return Err(Error::Dimension(format!(
            "map is C^{}+{} -> C^{}+{}, manifolds are C^{}+{} and C^{}+{}",
            h.n,
            h.d,
            h.f.len(),
            h.g.len(),
            m.n(),
            m.d(),
            target.n(),
            target.d()
        )));
    }
    let ly = m.layout();
    let amb = ly.ambient();
    let big_n = ly.big_n();
    let holo: Vec<usize> = (0..big_n).collect();
    let anti: Vec<usize> = (big_n..2 * big_n).collect();
    let f = h.f.remap(amb, &holo).with_nvars(amb);
    let g = h.g.remap(amb, &holo).with_nvars(amb);
    let f_bar = h.f.bar_conjugate().remap(amb, &anti).with_nvars(amb);
    let g_bar = h.g.bar_conjugate().remap(amb, &anti);
    let subs = f_bar.concat(&f)?.concat(&g)?;
    let image = target.q_bar().compose(&subs)?;
    let mut residuals = Vec::with_capacity(target.d());
    let mut order = u32::MAX;
    for (qb, gb) in image.iter().zip(g_bar.iter()) {
        let r = m.reduce_mod_m(&(qb - gb))?;
        order = order.min(r.prec());
        residuals.push(r);
    }
    if residuals.is_empty() {
        order = m.prec();
    }
    let sends = residuals.iter().all(|r| r.is_zero());
    Ok(MapCheckReport { sends, order, residuals })
}
