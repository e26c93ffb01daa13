use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::multi::MultiIndex;
use crate::tuple::SeriesTuple;

/// A multivariate formal power series known through total degree `prec`.
///
/// Terms of degree above `prec` are never stored, and neither are zero
/// coefficients.
#[derive(Clone)]
pub struct TruncatedSeries {
    nvars: usize,
    prec: u32,
    terms: BTreeMap<MultiIndex, C>,
}

pub type Series = TruncatedSeries;

impl TruncatedSeries {
    pub fn zero(nvars: usize, prec: u32) -> Self {
        TruncatedSeries { nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, prec: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, prec);
        s.add_term(MultiIndex::zero(nvars), c);
        s
    }

    pub fn one(nvars: usize, prec: u32) -> Self {
        Self::constant(nvars, prec, C::one())
    }

    pub fn var(nvars: usize, prec: u32, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut s = Self::zero(nvars, prec);
        s.add_term(MultiIndex::unit(nvars, i), C::one());
        s
    }

    pub fn monomial(nvars: usize, prec: u32, exps: &[u32], c: C) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut s = Self::zero(nvars, prec);
        s.add_term(MultiIndex::from_slice(exps), c);
        s
    }

    pub fn from_terms<I>(nvars: usize, prec: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut s = Self::zero(nvars, prec);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            s.add_term(MultiIndex(e), c);
        }
        s
    }

    /// Adds `c` to the coefficient of `m`, honouring the storage invariants.
    pub fn add_term(&mut self, m: MultiIndex, c: C) {
        if c.is_zero() || m.degree() > self.prec {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &MultiIndex) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> C {
        self.coeff(&MultiIndex::from_slice(exps))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    /// Lowers the validity order to `min(prec, p)`.
    pub fn truncate(&self, p: u32) -> Self {
        let p = p.min(self.prec);
        TruncatedSeries {
            nvars: self.nvars,
            prec: p,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Declares the stored terms exact through order `p`.
    ///
    /// Only valid when the caller knows the series is a polynomial whose
    /// omitted terms really vanish (fixture data, exact constructions).
    pub fn exact_to(&self, p: u32) -> Self {
        let mut s = self.clone();
        s.prec = p;
        s.terms.retain(|m, _| m.degree() <= p);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero_through(&self, order: u32) -> bool {
        self.terms.keys().all(|m| m.degree() > order)
    }

    /// Coefficient-wise agreement through `order`.
    pub fn eq_through(&self, o: &Self, order: u32) -> bool {
        self.nvars == o.nvars && (self - o).is_zero_through(order)
    }

    /// Lowest total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut s = Self::zero(self.nvars, self.prec);
        for (m, c) in &self.terms {
            if m.degree() == d {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let prec = self.prec.min(o.prec);
        let mut s = self.truncate(prec);
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let prec = self.prec.min(o.prec);
        let mut s = self.truncate(prec);
        for (m, c) in &o.terms {
            s.add_term(m.clone(), -c);
        }
        Ok(s)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        Ok(self.mul_to(o, self.prec.min(o.prec)))
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: o.nvars });
        }
        Ok(())
    }

    /// Product kept through order `p`; `p` must not exceed either precision.
    fn mul_to(&self, o: &Self, p: u32) -> Self {
        let mut s = Self::zero(self.nvars, p);
        if self.terms.is_empty() || o.terms.is_empty() {
            return s;
        }
        let (a, b) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let b_terms: Vec<(&MultiIndex, u32, &C)> =
            b.terms.iter().map(|(m, c)| (m, m.degree(), c)).collect();
        for (ma, ca) in &a.terms {
            let da = ma.degree();
            if da > p {
                break;
            }
            for (mb, db, cb) in &b_terms {
                if da + db > p {
                    break;
                }
                s.add_term(ma.add(mb), ca * cb);
            }
        }
        s
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.prec);
        }
        TruncatedSeries {
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.prec);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `∂^order f / ∂x_var^order`; the validity order drops by `order`.
    pub fn derive(&self, var: usize, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        let prec = self.prec.saturating_sub(order);
        let mut s = Self::zero(self.nvars, prec);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e < order {
                continue;
            }
            let mut k: i64 = 1;
            for t in 0..order {
                k *= (e - t) as i64;
            }
            let mut m2 = m.clone();
            m2.0[var] -= order;
            s.add_term(m2, c.scale_int(k));
        }
        s
    }

    /// `∂^β f` for a full multi-index.
    pub fn derive_multi(&self, beta: &[u32]) -> Self {
        let mut s = self.clone();
        for (v, &b) in beta.iter().enumerate() {
            s = s.derive(v, b);
        }
        s
    }

    /// Conjugates every coefficient; exponents are unchanged.
    pub fn bar_conjugate(&self) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Moves variable `i` to position `map[i]` in a space of `new_nvars`.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut s = Self::zero(new_nvars, self.prec);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            s.add_term(MultiIndex(e), c.clone());
        }
        s
    }

    /// Conjugated series with the two variable blocks `[0,k)` and `[k,2k)` swapped.
    ///
    /// A series `f(Z,ζ)` is real exactly when it equals its block-swapped
    /// conjugate `f̄(ζ,Z)`.
    pub fn bar_swap(&self, k: usize) -> Self {
        assert_eq!(self.nvars, 2 * k);
        let map: Vec<usize> = (0..2 * k).map(|i| if i < k { i + k } else { i - k }).collect();
        self.bar_conjugate().remap(2 * k, &map)
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        let mut s = Self::zero(self.nvars, self.prec);
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.0[v] == 0) {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    /// Coefficient of `x_vars^alpha` viewed as a series in the remaining variables
    /// (same ambient space, the listed variables absent). Its validity order is
    /// `prec - |alpha|`.
    pub fn coeff_in(&self, vars: &[usize], alpha: &[u32]) -> Self {
        let da: u32 = alpha.iter().sum();
        let prec = self.prec.saturating_sub(da);
        let mut s = Self::zero(self.nvars, prec);
        for (m, c) in &self.terms {
            if vars.iter().zip(alpha).all(|(&v, &a)| m.0[v] == a) {
                let mut m2 = m.clone();
                for &v in vars {
                    m2.0[v] = 0;
                }
                s.add_term(m2, c.clone());
            }
        }
        s
    }

    /// The exponent vectors in `vars` that occur among the stored terms.
    pub fn exponents_in(&self, vars: &[usize]) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> =
            self.terms.keys().map(|m| vars.iter().map(|&v| m.0[v]).collect()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Whether any stored term involves one of `vars`.
    pub fn depends_on(&self, vars: &[usize]) -> bool {
        self.terms.keys().any(|m| vars.iter().any(|&v| m.0[v] > 0))
    }

    /// Evaluates the stored polynomial at a point.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut pows: Vec<Vec<C>> = point.iter().map(|p| vec![C::one(), p.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap() * &point[i];
                    pows[i].push(next);
                }
                t = &t * &pows[i][e as usize];
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes `subs[j]` for variable `j`.
    ///
    /// Every substituted component must have zero constant term. The result
    /// lives in the variables of `subs` and is valid through the minimum of
    /// the precisions involved.
    pub fn compose(&self, subs: &SeriesTuple) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: subs.len() });
        }
        for (j, s) in subs.iter().enumerate() {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstant { component: j });
            }
        }
        let out_vars = subs.nvars();
        let p = subs.iter().map(|s| s.prec).min().unwrap_or(self.prec).min(self.prec);
        Ok(self.compose_unchecked(subs.components(), out_vars, p))
    }

    fn compose_unchecked(&self, subs: &[Series], out_vars: usize, p: u32) -> Self {
        let n = self.nvars;
        let orders: Vec<u32> = subs.iter().map(|s| s.order().unwrap_or(u32::MAX)).collect();
        let mut pows: Vec<Vec<Series>> =
            (0..n).map(|_| vec![Series::one(out_vars, p)]).collect();
        let mut keys: Vec<(&MultiIndex, &C)> = self
            .terms
            .iter()
            .filter(|(m, _)| {
                let mut lo: u64 = 0;
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        if orders[i] == u32::MAX {
                            return false;
                        }
                        lo += e as u64 * orders[i] as u64;
                    }
                }
                lo <= p as u64
            })
            .collect();
        keys.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
        let mut out = Series::zero(out_vars, p);
        // prefix[k] holds the product of the first k substituted powers.
        let mut prefix: Vec<Series> = vec![Series::one(out_vars, p)];
        let mut prev: Option<&MultiIndex> = None;
        for (m, c) in keys {
            let start = match prev {
                None => 0,
                Some(pm) => pm.0.iter().zip(&m.0).take_while(|(a, b)| a == b).count(),
            };
            prefix.truncate(start + 1);
            for i in start..n {
                let e = m.0[i] as usize;
                let next = if e == 0 {
                    prefix[i].clone()
                } else {
                    while pows[i].len() <= e {
                        let last = pows[i].last().unwrap();
                        let nxt = last.mul_to(&subs[i].truncate(p), p);
                        pows[i].push(nxt);
                    }
                    prefix[i].mul_to(&pows[i][e], p)
                };
                prefix.push(next);
            }
            for (mm, cc) in &prefix[n].terms {
                out.add_term(mm.clone(), cc * c);
            }
            prev = Some(m);
        }
        out
    }

    /// Substitutes series for a subset of the variables, keeping the others.
    ///
    /// `assign` pairs variable indices with replacement series in the same
    /// variable space. Replacements need zero constant term.
    pub fn substitute(&self, assign: &[(usize, Series)]) -> Result<Self> {
        let mut comps: Vec<Series> =
            (0..self.nvars).map(|i| Series::var(self.nvars, self.prec, i)).collect();
        for (v, s) in assign {
            if s.nvars != self.nvars {
                return Err(Error::VarCountMismatch { left: self.nvars, right: s.nvars });
            }
            comps[*v] = s.clone();
        }
        let prec = comps.iter().map(|s| s.prec).min().unwrap_or(self.prec);
        for c in comps.iter_mut() {
            *c = c.exact_or_trunc(prec);
        }
        self.compose(&SeriesTuple::new(comps)?)
    }

    fn exact_or_trunc(&self, p: u32) -> Self {
        if self.prec >= p {
            self.truncate(p)
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse of a unit, valid through the same order.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(Error::ZeroConstant)?;
        let p = self.prec;
        let parts: Vec<Series> = (0..=p).map(|d| self.homogeneous_part(d)).collect();
        let mut g: Vec<Series> = vec![Series::constant(self.nvars, p, inv0.clone())];
        let neg_inv = -&inv0;
        for k in 1..=p {
            let mut acc = Series::zero(self.nvars, p);
            for j in 1..=k {
                if parts[j as usize].is_zero() {
                    continue;
                }
                acc = &acc + &parts[j as usize].mul_to(&g[(k - j) as usize], p);
            }
            g.push(acc.scale(&neg_inv));
        }
        let mut out = Series::zero(self.nvars, p);
        for part in g {
            for (m, c) in part.terms {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// Reality test `f(Z,ζ) = f̄(ζ,Z)` through precision for a series in `2k` variables.
    pub fn is_real_under_swap(&self, k: usize) -> bool {
        self.eq_through(&self.bar_swap(k), self.prec)
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut s = Self::zero(self.nvars, self.prec);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), f(c));
        }
        s
    }

    /// Same coefficients, extra trailing variables appended (absent from all terms).
    pub fn extend_vars(&self, new_nvars: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(new_nvars, &map)
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, o: &Self) -> bool {
        self.eq_through(o, self.prec.min(o.prec))
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        self.try_add(o).expect("variable count mismatch")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self.try_sub(o).expect("variable count mismatch")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        self.try_mul(o).expect("variable count mismatch")
    }
}

impl<'a> Neg for &'a Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&C::int(-1))
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        &self + &o
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        &self - &o
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        &self * &o
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        write!(f, " + O({})", self.prec + 1)
    }
}
