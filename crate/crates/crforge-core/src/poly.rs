use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::series::Series;
use crate::tuple::SeriesTuple;

/// A polynomial `Σ coeffs[k] X^k` with series coefficients.
///
/// The leading coefficient is stored explicitly, even when it is zero
/// through precision.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyInX {
    coeffs: Vec<Series>,
}

impl PolyInX {
    pub fn new(coeffs: Vec<Series>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("polynomial without coefficients".into()));
        }
        let n = coeffs[0].nvars();
        for c in &coeffs {
            if c.nvars() != n {
                return Err(Error::VarCountMismatch { left: n, right: c.nvars() });
            }
        }
        Ok(PolyInX { coeffs })
    }

    /// `X^deg + Σ lower[k] X^k`.
    pub fn monic(lower: Vec<Series>) -> Result<Self> {
        let (n, p) = match lower.first() {
            Some(s) => (s.nvars(), s.prec()),
            None => return Err(Error::Shape("monic polynomial needs its lower coefficients".into())),
        };
        let mut c = lower;
        c.push(Series::one(n, p));
        PolyInX::new(c)
    }

    /// The degree-1 monic polynomial `X - root`.
    pub fn linear(root: &Series) -> Self {
        PolyInX { coeffs: alloc::vec![-root, Series::one(root.nvars(), root.prec())] }
    }

    pub fn constant(c: Series) -> Self {
        PolyInX { coeffs: alloc::vec![c] }
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap()
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Series {
        &self.coeffs[k]
    }

    pub fn leading(&self) -> &Series {
        self.coeffs.last().unwrap()
    }

    /// Leading coefficient identically 1 through precision.
    pub fn is_monic(&self) -> bool {
        let lead = self.leading();
        lead.eq_through(&Series::one(lead.nvars(), lead.prec()), lead.prec())
    }

    /// Lower coefficients all vanish at the origin.
    pub fn lower_coeffs_vanish_at_origin(&self) -> bool {
        self.coeffs[..self.deg()].iter().all(|c| c.constant_term().is_zero())
    }

    /// Horner evaluation at a series value of `X`.
    pub fn eval(&self, x: &Series) -> Series {
        let mut acc = self.leading().clone();
        for c in self.coeffs[..self.deg()].iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Embeds the polynomial into the series ring, `X` being variable `x_var`.
    pub fn to_series(&self, x_var: usize) -> Series {
        let n = self.nvars();
        let x = Series::var(n, self.prec(), x_var);
        self.eval(&x)
    }

    /// Reads a series as a polynomial in variable `x_var` of degree at most `max_deg`.
    pub fn from_series(f: &Series, x_var: usize, max_deg: usize) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(max_deg + 1);
        for k in 0..=max_deg {
            let mut alpha = alloc::vec![0u32; 1];
            alpha[0] = k as u32;
            let mut c = f.coeff_in(&[x_var], &alpha);
            c = c.exact_to(f.prec());
            coeffs.push(c);
        }
        if f.terms().keys().any(|m| m.0[x_var] as usize > max_deg) {
            return Err(Error::Shape("series has higher degree in X than allowed".into()));
        }
        PolyInX::new(coeffs)
    }

    /// Formal derivative in `X`.
    pub fn derivative(&self) -> Self {
        if self.deg() == 0 {
            return PolyInX::constant(Series::zero(self.nvars(), self.prec()));
        }
        PolyInX {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&C::int(k as i64 + 1)))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> Self {
        PolyInX { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn compose_coeffs(&self, subs: &SeriesTuple) -> Result<Self> {
        Ok(PolyInX { coeffs: self.coeffs.iter().map(|c| c.compose(subs)).collect::<Result<_>>()? })
    }

    pub fn mul(&self, o: &PolyInX) -> PolyInX {
        let n = self.nvars();
        let p = self.prec().min(o.prec());
        let mut out: Vec<Series> = (0..=self.deg() + o.deg()).map(|_| Series::zero(n, p)).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PolyInX { coeffs: out }
    }

    /// Drops leading coefficients that vanish through precision.
    pub fn normalized(&self) -> PolyInX {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().unwrap().is_zero() {
            c.pop();
        }
        PolyInX { coeffs: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_embedding() {
        // X^2 - u in variables (u, X)
        let u = Series::var(2, 4, 0);
        let p = PolyInX::monic(alloc::vec![-&u, Series::zero(2, 4)]).unwrap();
        assert!(p.is_monic());
        assert!(p.lower_coeffs_vanish_at_origin());
        let s = p.to_series(1);
        let back = PolyInX::from_series(&s, 1, 2).unwrap();
        assert_eq!(back, p);
        let d = p.derivative();
        assert_eq!(d.deg(), 1);
        assert_eq!(d.coeff(1), &Series::constant(2, 4, C::int(2)));
    }
}
