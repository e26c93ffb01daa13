use alloc::format;
use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::implicit::implicit_solve;
use crate::linalg;
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::describe_first_term;

/// Variable positions for a manifold with CR dimension `n` and codimension `d`.
///
/// The ambient ring is ordered `(z, w, χ, τ)`; the series `Q` live in `(z, χ, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub d: usize,
}

impl Layout {
    pub fn big_n(&self) -> usize {
        self.n + self.d
    }
    pub fn ambient(&self) -> usize {
        2 * self.big_n()
    }
    pub fn q_vars(&self) -> usize {
        2 * self.n + self.d
    }
    pub fn z(&self, i: usize) -> usize {
        i
    }
    pub fn w(&self, l: usize) -> usize {
        self.n + l
    }
    pub fn chi(&self, i: usize) -> usize {
        self.big_n() + i
    }
    pub fn tau(&self, l: usize) -> usize {
        self.big_n() + self.n + l
    }
    /// Embedding of the `(z, χ, τ)` variables into the ambient ring.
    pub fn q_to_ambient(&self) -> Vec<usize> {
        let mut m: Vec<usize> = (0..self.n).map(|i| self.z(i)).collect();
        m.extend((0..self.n).map(|i| self.chi(i)));
        m.extend((0..self.d).map(|l| self.tau(l)));
        m
    }
    /// Embedding of `Q̄(χ, z, w)`: the `z`-slot goes to `χ`, the `χ`-slot to `z`, the `τ`-slot to `w`.
    pub fn qbar_to_ambient(&self) -> Vec<usize> {
        let mut m: Vec<usize> = (0..self.n).map(|i| self.chi(i)).collect();
        m.extend((0..self.n).map(|i| self.z(i)));
        m.extend((0..self.d).map(|l| self.w(l)));
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorForm {
    /// `w_j - Q_j(z, χ, τ)`
    Holo,
    /// `τ_j - Q̄_j(χ, z, w)`
    Antiholo,
}

/// A formal generic submanifold in normal coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericSubmanifoldNF {
    layout: Layout,
    q: SeriesTuple,
}

impl GenericSubmanifoldNF {
    /// Validates normality of `Q` and reality of the ideal through precision.
    pub fn new(n: usize, d: usize, q: SeriesTuple) -> Result<Self> {
        let m = Self::new_unchecked(n, d, q)?;
        m.check_normality()?;
        m.check_reality()?;
        Ok(m)
    }

    /// Builds the manifold without the normality and reality checks (shape only).
    pub fn new_unchecked(n: usize, d: usize, q: SeriesTuple) -> Result<Self> {
        let layout = Layout { n, d };
        if q.len() != d {
            return Err(Error::ArityMismatch { expected: d, got: q.len() });
        }
        if q.nvars() != layout.q_vars() {
            return Err(Error::VarCountMismatch { left: layout.q_vars(), right: q.nvars() });
        }
        if d == 0 {
            return Err(Error::Dimension("codimension must be positive".into()));
        }
        Ok(GenericSubmanifoldNF { layout, q })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }
    pub fn n(&self) -> usize {
        self.layout.n
    }
    pub fn d(&self) -> usize {
        self.layout.d
    }
    pub fn big_n(&self) -> usize {
        self.layout.big_n()
    }
    pub fn prec(&self) -> u32 {
        self.q.prec()
    }
    pub fn q(&self) -> &SeriesTuple {
        &self.q
    }

    /// `Q̄` as a series tuple in the same slots `(z, χ, τ)` with conjugated coefficients.
    pub fn q_bar(&self) -> SeriesTuple {
        self.q.bar_conjugate()
    }

    fn check_normality(&self) -> Result<()> {
        let ly = self.layout;
        let zs: Vec<usize> = (0..ly.n).collect();
        let chis: Vec<usize> = (ly.n..2 * ly.n).collect();
        for (l, ql) in self.q.iter().enumerate() {
            let tau = Series::var(ly.q_vars(), ql.prec(), 2 * ly.n + l);
            for (vars, label) in [(&zs, "Q(0,χ,τ)"), (&chis, "Q(z,0,τ)")] {
                let r = &ql.set_zero(vars) - &tau;
                if !r.is_zero() {
                    return Err(Error::Normality(format!(
                        "{} differs from τ in component {}: {}",
                        label,
                        l + 1,
                        describe_first_term(&r)
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_reality(&self) -> Result<()> {
        for (l, r) in self.generators(GeneratorForm::Antiholo).iter().enumerate() {
            let red = self.reduce_mod_m(r)?;
            if !red.is_zero() {
                return Err(Error::Reality(format!(
                    "τ - Q̄(χ,z,w) does not reduce to 0 in component {}: {}",
                    l + 1,
                    describe_first_term(&red)
                )));
            }
        }
        Ok(())
    }

    /// `Q_j` placed in the ambient ring `(z, w, χ, τ)`.
    pub fn q_ambient(&self) -> SeriesTuple {
        self.q.remap(self.layout.ambient(), &self.layout.q_to_ambient())
    }

    /// `Q̄_j(χ, z, w)` placed in the ambient ring.
    pub fn q_bar_ambient(&self) -> SeriesTuple {
        self.q_bar().remap(self.layout.ambient(), &self.layout.qbar_to_ambient())
    }

    /// Generators of `I(M)` in the ambient ring.
    pub fn generators(&self, form: GeneratorForm) -> SeriesTuple {
        let ly = self.layout;
        let amb = ly.ambient();
        let (series, var): (SeriesTuple, fn(&Layout, usize) -> usize) = match form {
            GeneratorForm::Holo => (self.q_ambient(), Layout::w),
            GeneratorForm::Antiholo => (self.q_bar_ambient(), Layout::tau),
        };
        let comps = series
            .iter()
            .enumerate()
            .map(|(l, s)| &Series::var(amb, s.prec(), var(&ly, l)) - s)
            .collect();
        SeriesTuple::new(comps).expect("shared variables")
    }

    /// Substitutes `w = Q(z, χ, τ)`; the result lives in `(z, χ, τ)`.
    pub fn reduce_mod_m(&self, f: &Series) -> Result<Series> {
        let ly = self.layout;
        if f.nvars() != ly.ambient() {
            return Err(Error::VarCountMismatch { left: ly.ambient(), right: f.nvars() });
        }
        let p = f.prec();
        let nq = ly.q_vars();
        let mut subs: Vec<Series> = Vec::with_capacity(ly.ambient());
        for i in 0..ly.n {
            subs.push(Series::var(nq, p, i));
        }
        for l in 0..ly.d {
            subs.push(self.q[l].truncate(p));
        }
        for i in 0..ly.n {
            subs.push(Series::var(nq, p, ly.n + i));
        }
        for l in 0..ly.d {
            subs.push(Series::var(nq, p, 2 * ly.n + l));
        }
        f.compose(&SeriesTuple::new(subs)?)
    }

    /// Whether `f` lies in `I(M)` through its precision.
    pub fn contains(&self, f: &Series) -> Result<bool> {
        Ok(self.reduce_mod_m(f)?.is_zero())
    }
}

/// Real defining series `ρ(Z, ζ)` of a generic submanifold, ambient `(Z, ζ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefiningData {
    big_n: usize,
    rho: SeriesTuple,
}

impl DefiningData {
    /// Validates reality `ρ(Z,ζ) = ρ̄(ζ,Z)` and genericity `rank ∂_Zρ(0) = d`.
    pub fn new(big_n: usize, rho: SeriesTuple) -> Result<Self> {
        if rho.nvars() != 2 * big_n {
            return Err(Error::VarCountMismatch { left: 2 * big_n, right: rho.nvars() });
        }
        let d = rho.len();
        if d == 0 || d >= big_n {
            return Err(Error::Dimension(format!("codimension {} in C^{}", d, big_n)));
        }
        for (l, r) in rho.iter().enumerate() {
            if !r.constant_term().is_zero() {
                return Err(Error::Shape(format!("ρ_{} does not vanish at the origin", l + 1)));
            }
            let diff = r - &r.bar_swap(big_n);
            if !diff.is_zero() {
                return Err(Error::Reality(format!("ρ_{} is not real: {}", l + 1, describe_first_term(&diff))));
            }
        }
        let dd = DefiningData { big_n, rho };
        if linalg::rank(&dd.dz_at_zero()) < d {
            return Err(Error::Genericity("∂_Zρ_1(0),…,∂_Zρ_d(0) are dependent".into()));
        }
        Ok(dd)
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }
    pub fn d(&self) -> usize {
        self.rho.len()
    }
    pub fn n(&self) -> usize {
        self.big_n - self.rho.len()
    }
    pub fn rho(&self) -> &SeriesTuple {
        &self.rho
    }
    pub fn prec(&self) -> u32 {
        self.rho.prec()
    }

    fn jet1(&self, offset: usize) -> Vec<Vec<C>> {
        let zero = alloc::vec![C::zero(); 2 * self.big_n];
        self.rho
            .iter()
            .map(|r| (0..self.big_n).map(|k| r.derive(offset + k, 1).eval(&zero)).collect())
            .collect()
    }

    /// `∂ρ/∂Z` at the origin, `d × N`.
    pub fn dz_at_zero(&self) -> Vec<Vec<C>> {
        self.jet1(0)
    }

    /// `∂ρ/∂ζ` at the origin, `d × N`.
    pub fn dzeta_at_zero(&self) -> Vec<Vec<C>> {
        self.jet1(self.big_n)
    }
}

/// A normal form together with the coordinate change producing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    pub manifold: GenericSubmanifoldNF,
    /// Old coordinates `Z` as series in the new `(z, w)`.
    pub change: SeriesTuple,
}

/// Brings defining data into normal coordinates.
///
/// A coordinate permutation makes `∂ρ/∂w` invertible, `ρ = 0` is solved as
/// `w = Q̃(z, χ, τ)`, and `w` is replaced by `w′` with `w = Q̃(z, 0, w′)`
/// (paired with the conjugate change on `τ`). Normality is then verified.
pub fn normalize(defining: &DefiningData) -> Result<Normalization> {
    let nn = defining.big_n();
    let d = defining.d();
    let n = nn - d;
    let ly = Layout { n, d };
    let p = defining.prec();

    // choose the w-block: trailing columns when they work, else pivot columns
    let dz = defining.dz_at_zero();
    let trailing: Vec<usize> = (n..nn).collect();
    let sub = |cols: &[usize]| -> Vec<Vec<C>> { dz.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect() };
    let wcols = if !linalg::det(&sub(&trailing)).is_zero() {
        trailing
    } else {
        let (_, cols) = linalg::maximal_minor(&dz);
        cols
    };
    let zcols: Vec<usize> = (0..nn).filter(|c| !wcols.contains(c)).collect();
    let order: Vec<usize> = zcols.iter().chain(wcols.iter()).copied().collect();
    // old variable order[k] becomes new variable k (and likewise for ζ)
    let mut to_new = alloc::vec![0usize; 2 * nn];
    for (k, &old) in order.iter().enumerate() {
        to_new[old] = k;
        to_new[nn + old] = nn + k;
    }
    let rho = defining.rho().remap(2 * nn, &to_new);

    let w_vars: Vec<usize> = (n..nn).collect();
    let q_tilde = implicit_solve(&rho, &w_vars)?;

    // w = Q̃(z, 0, w′) and τ = Q̃̄(χ, 0, τ′), solved for w′ in (z, χ, τ′, w′)
    let nq = ly.q_vars();
    let ext = nq + d;
    let chis: Vec<usize> = (n..2 * n).collect();
    let lhs_map: Vec<usize> = (0..2 * n).chain((0..d).map(|l| nq + l)).collect();
    let qbar_chi0: Vec<Series> = q_tilde
        .bar_conjugate()
        .iter()
        .map(|s| {
            let t = s.set_zero(&chis);
            let map: Vec<usize> = (0..n).map(|i| n + i).chain(n..2 * n).chain((0..d).map(|l| 2 * n + l)).collect();
            t.remap(nq, &map)
        })
        .collect();
    let mut subs: Vec<Series> = (0..2 * n).map(|i| Series::var(nq, p, i)).collect();
    subs.extend(qbar_chi0);
    let subs = SeriesTuple::new(subs)?;
    let mut system = Vec::with_capacity(d);
    for l in 0..d {
        let lhs = q_tilde[l].set_zero(&chis).remap(ext, &lhs_map);
        let rhs = q_tilde[l].compose(&subs)?.extend_vars(ext);
        system.push(&lhs - &rhs);
    }
    let solve_for: Vec<usize> = (nq..ext).collect();
    let q = implicit_solve(&SeriesTuple::new(system)?, &solve_for)?;
    let manifold = GenericSubmanifoldNF::new(n, d, q)?;

    // old Z in terms of new (z, w′)
    let zw_map: Vec<usize> = (0..n).chain(0..n).chain((0..d).map(|l| n + l)).collect();
    let mut new_in_zw: Vec<Series> = (0..n).map(|i| Series::var(nn, p, i)).collect();
    for l in 0..d {
        new_in_zw.push(q_tilde[l].set_zero(&chis).remap(nn, &zw_map));
    }
    let change: Vec<Series> = (0..nn).map(|old| new_in_zw[to_new[old]].clone()).collect();
    Ok(Normalization { manifold, change: SeriesTuple::new(change)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg_q(p: u32) -> SeriesTuple {
        // (z, χ, τ): τ + 2i z χ
        SeriesTuple::new(alloc::vec![Series::from_terms(
            3,
            p,
            [(alloc::vec![0, 0, 1], C::one()), (alloc::vec![1, 1, 0], C::gauss(0, 2))]
        )])
        .unwrap()
    }

    pub(crate) fn heisenberg_rho(p: u32) -> SeriesTuple {
        // (z, w, χ, τ): (w - τ)/2i - z χ
        SeriesTuple::new(alloc::vec![Series::from_terms(
            4,
            p,
            [
                (alloc::vec![0, 1, 0, 0], C::ratio(-1, 2) * C::i()),
                (alloc::vec![0, 0, 0, 1], C::ratio(1, 2) * C::i()),
                (alloc::vec![1, 0, 1, 0], C::int(-1)),
            ]
        )])
        .unwrap()
    }

    #[test]
    fn generators_of_heisenberg() {
        let m = GenericSubmanifoldNF::new(1, 1, heisenberg_q(8)).unwrap();
        let holo = m.generators(GeneratorForm::Holo);
        let expect = Series::from_terms(
            4,
            8,
            [
                (alloc::vec![0, 1, 0, 0], C::one()),
                (alloc::vec![0, 0, 0, 1], C::int(-1)),
                (alloc::vec![1, 0, 1, 0], C::gauss(0, -2)),
            ],
        );
        assert_eq!(holo[0], expect);
        let anti = m.generators(GeneratorForm::Antiholo);
        let expect = Series::from_terms(
            4,
            8,
            [
                (alloc::vec![0, 0, 0, 1], C::one()),
                (alloc::vec![0, 1, 0, 0], C::int(-1)),
                (alloc::vec![1, 0, 1, 0], C::gauss(0, 2)),
            ],
        );
        assert_eq!(anti[0], expect);
        assert!(m.contains(&holo[0]).unwrap());
        assert!(m.contains(&anti[0]).unwrap());
        let w = Series::var(4, 8, 1);
        assert_eq!(m.reduce_mod_m(&w).unwrap(), heisenberg_q(8)[0]);
    }

    #[test]
    fn normality_and_reality_are_enforced() {
        let mut bad = heisenberg_q(8)[0].clone();
        bad.add_term(crate::multi::MultiIndex(alloc::vec![2, 0, 0]), C::one());
        let e = GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![bad]).unwrap()).unwrap_err();
        assert!(matches!(e, Error::Normality(_)));
        let mut nonreal = heisenberg_q(8)[0].clone();
        nonreal.add_term(crate::multi::MultiIndex(alloc::vec![1, 1, 0]), C::one());
        let e = GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![nonreal]).unwrap()).unwrap_err();
        assert!(matches!(e, Error::Reality(_)));
    }

    #[test]
    fn normalize_heisenberg() {
        let dd = DefiningData::new(2, heisenberg_rho(8)).unwrap();
        let nf = normalize(&dd).unwrap();
        assert_eq!(nf.manifold.q(), &heisenberg_q(8));
        assert_eq!(nf.change, SeriesTuple::identity(2, 8));
    }

    #[test]
    fn normalize_needs_a_permutation() {
        // coordinates (w, z): same hypersurface with the roles swapped
        let rho = heisenberg_rho(8).remap(4, &[1, 0, 3, 2]);
        let dd = DefiningData::new(2, rho).unwrap();
        let nf = normalize(&dd).unwrap();
        assert_eq!(nf.manifold.q(), &heisenberg_q(8));
        assert_eq!(nf.change[0], Series::var(2, 8, 1));
        assert_eq!(nf.change[1], Series::var(2, 8, 0));
    }

    #[test]
    fn defining_data_checks() {
        let mut nonreal = heisenberg_rho(8)[0].clone();
        nonreal.add_term(crate::multi::MultiIndex(alloc::vec![1, 0, 0, 0]), C::one());
        assert!(matches!(
            DefiningData::new(2, SeriesTuple::new(alloc::vec![nonreal]).unwrap()),
            Err(Error::Reality(_))
        ));
        // |z|^2 - |w|^2 has no linear part
        let degenerate = Series::from_terms(4, 8, [(alloc::vec![1, 0, 1, 0], C::one()), (alloc::vec![0, 1, 0, 1], C::int(-1))]);
        assert!(matches!(
            DefiningData::new(2, SeriesTuple::new(alloc::vec![degenerate]).unwrap()),
            Err(Error::Genericity(_))
        ));
    }
}
