use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::geometry::GenericSubmanifoldNF;
use crate::mapping::FormalMapNF;
use crate::multi::MultiIndex;
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::expand::reflection_generators;

/// The relations `R_{βj}(a, b, X)`, `1 ≤ |β| ≤ r`.
///
/// Variables: for each `γ` with `|γ| ≤ r` the block `a_γ` (`n′` entries, standing for
/// `L^γF̄ − L^γF̄(0)`) followed by `b_γ` (`d′` entries, standing for `L^γḠ`); then `X` (`n′` entries).
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionSystem {
    pub r: u32,
    pub n2: usize,
    pub d2: usize,
    pub gammas: Vec<MultiIndex>,
    /// `L^γF̄_m(0)`.
    pub ell: Vec<Vec<C>>,
    pub labels: Vec<(MultiIndex, usize)>,
    pub rows: SeriesTuple,
}

impl ReflectionSystem {
    fn block(&self) -> usize {
        self.n2 + self.d2
    }
    /// Number of jet variables `(a, b)`.
    pub fn p(&self) -> usize {
        self.gammas.len() * self.block()
    }
    pub fn a_var(&self, g: usize, m: usize) -> usize {
        g * self.block() + m
    }
    pub fn b_var(&self, g: usize, l: usize) -> usize {
        g * self.block() + self.n2 + l
    }
    pub fn x_var(&self, i: usize) -> usize {
        self.p() + i
    }
    pub fn nvars(&self) -> usize {
        self.p() + self.n2
    }
}

fn factorial(m: &MultiIndex) -> C {
    C::from_rational(m.factorial().into())
}

/// `L^γ` of the conjugate of `f(z, 0)` at the origin, for each `γ`.
fn segre_jets(f: &SeriesTuple, n: usize, gammas: &[MultiIndex]) -> Vec<Vec<C>> {
    let d = f.nvars() - n;
    gammas
        .iter()
        .map(|g| {
            let mut e = g.0.clone();
            e.extend(core::iter::repeat(0).take(d));
            let e = MultiIndex(e);
            f.iter().map(|s| s.coeff(&e).conj() * factorial(g)).collect()
        })
        .collect()
}

pub fn build_reflection_system(
    m: &GenericSubmanifoldNF,
    target: &GenericSubmanifoldNF,
    h: &FormalMapNF,
    r: u32,
) -> Result<ReflectionSystem> {
    if h.source_dims() != (m.n(), m.d()) || h.target_dims() != (target.n(), target.d()) {
        return Err(Error::Dimension("map does not match source and target".into()));
    }
    let n = m.n();
    let n2 = target.n();
    let d2 = target.d();
    let gammas = MultiIndex::up_to_degree(n, r);
    let ell = segre_jets(h.f(), n, &gammas);
    if segre_jets(h.g(), n, &gammas).iter().flatten().any(|c| !c.is_zero()) {
        return Err(Error::Precondition("G(z, 0) does not vanish; map is not between normal coordinates".into()));
    }
    let mut sys = ReflectionSystem { r, n2, d2, gammas, ell, labels: Vec::new(), rows: SeriesTuple::empty(0) };
    let p = sys.p();
    let q = n2;
    let t = p + q + n;
    let prec = target.prec();
    let var = |i: usize| Series::var(t, prec, i);
    let s_var = |i: usize| p + q + i;

    let mut fbar_s = Vec::with_capacity(n2);
    for mi in 0..n2 {
        let mut acc = Series::zero(t, prec);
        for (gi, g) in sys.gammas.iter().enumerate() {
            let mut sg = Series::one(t, prec);
            for (i, &e) in g.0.iter().enumerate() {
                sg = &sg * &var(s_var(i)).pow(e);
            }
            let lin = &var(sys.a_var(gi, mi)) + &Series::constant(t, prec, sys.ell[gi][mi].clone());
            let inv = factorial(g).inv().expect("factorials are nonzero");
            acc = &acc + &(&lin * &sg).scale(&inv);
        }
        fbar_s.push(acc);
    }

    // Q′(X, a_0, b_0)
    let mut inner: Vec<Series> = (0..n2).map(|i| var(sys.x_var(i))).collect();
    inner.extend((0..n2).map(|i| var(sys.a_var(0, i))));
    inner.extend((0..d2).map(|l| var(sys.b_var(0, l))));
    let qp = target.q().compose(&SeriesTuple::new(inner)?)?;

    let mut outer = fbar_s;
    outer.extend((0..n2).map(|i| var(sys.x_var(i))));
    outer.extend(qp.into_vec());
    let comp = target.q_bar().compose(&SeriesTuple::new(outer)?)?;

    let s_vars: Vec<usize> = (0..n).map(s_var).collect();
    let keep: Vec<usize> = (0..t).map(|i| if i < p + q { i } else { 0 }).collect();
    let mut rows = SeriesTuple::empty(p + q);
    for (gi, beta) in sys.gammas.clone().iter().enumerate() {
        if beta.is_zero() {
            continue;
        }
        for (j, c) in comp.iter().enumerate() {
            let lb = c.coeff_in(&s_vars, &beta.0).scale(&factorial(beta)).remap(p + q, &keep);
            let b = Series::var(p + q, lb.prec(), sys.b_var(gi, j));
            rows.push(&lb - &b);
            sys.labels.push((beta.clone(), j));
        }
    }
    sys.rows = rows;

    // the rows at a = b = 0 must be the reflection generators
    let gens = reflection_generators(target, h, r);
    let u: Vec<usize> = (0..p).collect();
    let to_x: Vec<usize> = (0..p + q).map(|i| i.saturating_sub(p)).collect();
    for (row, g) in sys.rows.iter().zip(gens.iter()) {
        if row.set_zero(&u).remap(q, &to_x) != *g {
            return Err(Error::Shape("reflection system disagrees with its generators at the origin".into()));
        }
    }
    Ok(sys)
}
