use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::geometry::FormalVectorField;
use crate::multi::MultiIndex;
use crate::poly::PolyInX;
use crate::series::Series;
use crate::tuple::SeriesTuple;

/// `S^μ f = S_1^{μ_1}(S_2^{μ_2}(… S_N^{μ_N} f))`, memoized per `μ`.
pub struct FieldPowers<'a> {
    fields: &'a [FormalVectorField],
    memo: BTreeMap<MultiIndex, Series>,
}

impl<'a> FieldPowers<'a> {
    pub fn new(fields: &'a [FormalVectorField], f: &Series) -> Self {
        let mut memo = BTreeMap::new();
        memo.insert(MultiIndex::zero(fields.len()), f.clone());
        FieldPowers { fields, memo }
    }

    pub fn get(&mut self, mu: &MultiIndex) -> Series {
        if let Some(s) = self.memo.get(mu) {
            return s.clone();
        }
        let i = mu.0.iter().position(|&e| e > 0).expect("zero index is memoized");
        let inner = self.get(&mu.checked_sub(&MultiIndex::unit(mu.len(), i)).unwrap());
        let s = self.fields[i].apply(&inner);
        self.memo.insert(mu.clone(), s.clone());
        s
    }
}

fn fact(m: &MultiIndex) -> BigInt {
    m.factorial()
}

fn lex_lt(a: &MultiIndex, b: &MultiIndex) -> bool {
    a.lex_cmp(b) == Ordering::Less
}

fn binom(k: usize, j: usize) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 0..j {
        acc = acc * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    acc
}

/// Ordered tuples of length `len` from `pool` whose sum stays componentwise below `budget`.
fn tuples(pool: &[MultiIndex], len: usize, budget: &MultiIndex) -> Vec<Vec<MultiIndex>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(pool: &[MultiIndex], len: usize, left: &MultiIndex, cur: &mut Vec<MultiIndex>, out: &mut Vec<Vec<MultiIndex>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for nu in pool {
            if let Some(rest) = left.checked_sub(nu) {
                cur.push(nu.clone());
                rec(pool, len, &rest, cur, out);
                cur.pop();
            }
        }
    }
    rec(pool, len, budget, &mut cur, &mut out);
    out
}

/// The terms of the regrouped Leibniz expansion of `S^γ P(h(x), x)` relative to `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizTerms {
    pub alpha: MultiIndex,
    pub gamma: MultiIndex,
    /// `A(γ, α, 0)`.
    pub a0: Series,
    /// `(ν¹, …, ν^j)` with each `ν ≥ α`, and `A(γ, α, j, ν¹, …, ν^j)`.
    pub terms: Vec<(Vec<MultiIndex>, Series)>,
}

/// Shared data for the Leibniz assembly: `S^μ a_k` and `S^ν h`.
pub struct LeibnizContext<'a> {
    poly: &'a PolyInX,
    coeffs: Vec<FieldPowers<'a>>,
    h: FieldPowers<'a>,
    nvars: usize,
}

impl<'a> LeibnizContext<'a> {
    pub fn new(poly: &'a PolyInX, h: &Series, fields: &'a [FormalVectorField]) -> Self {
        let coeffs = poly.coeffs().iter().map(|a| FieldPowers::new(fields, a)).collect();
        LeibnizContext { poly, coeffs, h: FieldPowers::new(fields, h), nvars: fields.len() }
    }

    pub fn derived_h(&mut self, nu: &MultiIndex) -> Series {
        self.h.get(nu)
    }

    /// `Σ_{k ≥ j} C(k,j) Σ γ!/(μ!ν¹!…ν^k!) S^μ a_k S^{ν^{j+1}}h … S^{ν^k}h`, the tail `ν` lexicographically below `α`.
    pub fn coefficient(&mut self, gamma: &MultiIndex, alpha: &MultiIndex, head: &[MultiIndex]) -> Series {
        let j = head.len();
        let mut budget = gamma.clone();
        for nu in head {
            budget = match budget.checked_sub(nu) {
                Some(b) => b,
                None => return Series::zero(self.h_nvars(), self.h.get(&MultiIndex::zero(self.nvars)).prec()),
            };
        }
        let pool: Vec<MultiIndex> = MultiIndex::in_box(&MultiIndex::zero(self.nvars), &budget)
            .into_iter()
            .filter(|nu| lex_lt(nu, alpha))
            .collect();
        let head_fact: BigInt = head.iter().map(fact).product();
        let gfact = fact(gamma);
        let mut acc: Option<Series> = None;
        for k in j..=self.poly.deg() {
            for tail in tuples(&pool, k - j, &budget) {
                let mut mu = budget.clone();
                for nu in &tail {
                    mu = mu.checked_sub(nu).unwrap();
                }
                let den: BigInt = &head_fact * fact(&mu) * tail.iter().map(fact).product::<BigInt>();
                let c = C::from_rational(num_rational::BigRational::new(&gfact * binom(k, j), den));
                let mut t = self.coeffs[k].get(&mu).scale(&c);
                for nu in &tail {
                    t = &t * &self.h.get(nu);
                }
                acc = Some(match acc {
                    None => t,
                    Some(a) => &a + &t,
                });
            }
        }
        acc.unwrap_or_else(|| Series::zero(self.h_nvars(), self.h.get(&MultiIndex::zero(self.nvars)).prec()))
    }

    fn h_nvars(&mut self) -> usize {
        self.h.get(&MultiIndex::zero(self.nvars)).nvars()
    }

    /// `A(γ, α, 0)` and every `A(γ, α, j, ν¹, …, ν^j)` with each `ν ≥ α` and `Σν ≤ γ`.
    pub fn terms(&mut self, alpha: &MultiIndex, gamma: &MultiIndex) -> LeibnizTerms {
        let a0 = self.coefficient(gamma, alpha, &[]);
        let pool: Vec<MultiIndex> = MultiIndex::in_box(&MultiIndex::zero(self.nvars), gamma)
            .into_iter()
            .filter(|nu| !lex_lt(nu, alpha))
            .collect();
        let mut terms = Vec::new();
        for j in 1..=self.poly.deg() {
            for head in tuples(&pool, j, gamma) {
                let a = self.coefficient(gamma, alpha, &head);
                terms.push((head, a));
            }
        }
        LeibnizTerms { alpha: alpha.clone(), gamma: gamma.clone(), a0, terms }
    }
}

/// `A(γ, α, 0)` and all `A(γ, α, j, ν¹, …, ν^j)` for `P(X, x)`, `h` and the fields `S`.
pub fn leibniz_coefficients(
    poly: &PolyInX,
    h: &Series,
    fields: &[FormalVectorField],
    alpha: &MultiIndex,
    gamma: &MultiIndex,
) -> LeibnizTerms {
    LeibnizContext::new(poly, h, fields).terms(alpha, gamma)
}

/// `R_α(X, x)` with `R_α((S^α h)(v(y)), v(y)) ≡ 0` and `R_α(X, v(y)) ≢ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedPolynomial {
    pub alpha: MultiIndex,
    /// The multi-index whose derivative produced `R_α`; equals `α` in the degree-one case.
    pub gamma0: MultiIndex,
    /// `R_α(X, x)`: `A(γ⁰, α, 0) + Σ_j A(γ⁰, α, j, α, …, α) X^j`.
    pub poly: PolyInX,
    /// `R_α(X, v(y))`.
    pub along: PolyInX,
    /// `(S^α h)(v(y))`, the verified root.
    pub root: Series,
    /// Order through which `R_α(root, v) ≡ 0` was checked.
    pub order: u32,
}

fn compose_poly(p: &PolyInX, v: &SeriesTuple) -> Result<PolyInX> {
    p.compose_coeffs(v)
}

pub fn derived_polynomial(
    poly: &PolyInX,
    h: &Series,
    fields: &[FormalVectorField],
    v: &SeriesTuple,
    alpha: &MultiIndex,
) -> Result<DerivedPolynomial> {
    if fields.len() != alpha.len() {
        return Err(Error::ArityMismatch { expected: fields.len(), got: alpha.len() });
    }
    let big_j = poly.deg() as u32;
    if big_j == 0 {
        return Err(Error::Shape("polynomial of degree zero".into()));
    }
    let mut ctx = LeibnizContext::new(poly, h, fields);
    let repeated = |j: usize| -> Vec<MultiIndex> { (0..j).map(|_| alpha.clone()).collect() };

    let mut chosen = None;
    let a11 = ctx.coefficient(alpha, alpha, &repeated(1));
    if !a11.compose(v)?.is_zero() {
        chosen = Some((alpha.clone(), alloc::vec![ctx.coefficient(alpha, alpha, &[]), a11]));
    } else {
        for gamma in MultiIndex::in_box(alpha, &alpha.scale(big_j)) {
            if gamma == *alpha {
                continue;
            }
            let heads: Vec<Series> = (1..=big_j as usize).map(|j| ctx.coefficient(&gamma, alpha, &repeated(j))).collect();
            let mut hit = false;
            for a in &heads {
                if !a.compose(v)?.is_zero() {
                    hit = true;
                    break;
                }
            }
            if hit {
                let mut c = alloc::vec![ctx.coefficient(&gamma, alpha, &[])];
                c.extend(heads);
                chosen = Some((gamma, c));
                break;
            }
        }
    }
    let (gamma0, coeffs) = chosen.ok_or_else(|| {
        Error::BoundExhausted(alloc::format!("no nonvanishing Leibniz coefficient in the box [{:?}, {:?}]", alpha, alpha.scale(big_j)))
    })?;
    let r = PolyInX::new(coeffs)?;
    let along = compose_poly(&r, v)?;
    let root = ctx.derived_h(alpha).compose(v)?;
    let value = along.eval(&root);
    if along.coeffs().iter().all(|c| c.is_zero()) {
        return Err(Error::Shape("derived polynomial vanishes along v".into()));
    }
    if !value.is_zero() {
        return Err(Error::Precondition(alloc::format!(
            "derived polynomial does not annihilate S^{:?}h along v (is P(h, x) in the ideal and S tangent?)",
            alpha
        )));
    }
    Ok(DerivedPolynomial { alpha: alpha.clone(), gamma0, poly: r, along, root, order: value.prec() })
}
