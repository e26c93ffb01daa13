use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

pub type C = ComplexRational;

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRational { re, im }
    }

    pub fn zero() -> Self {
        ComplexRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self::gauss(0, 1)
    }

    pub fn int(n: i64) -> Self {
        ComplexRational { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn gauss(re: i64, im: i64) -> Self {
        ComplexRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ComplexRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        ComplexRational { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(ComplexRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        ComplexRational { re: &self.re * &k, im: &self.im * &k }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        ComplexRational { re: &self.re * k, im: &self.im * k }
    }
}

/// Canonical text for a rational: `p` or `p/q` with `q > 0` in lowest terms.
pub fn rational_to_string(r: &BigRational) -> String {
    use alloc::string::ToString;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError;

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("malformed rational")
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|_| ParseRationalError)?;
    let d = BigInt::from_str(d.trim()).map_err(|_| ParseRationalError)?;
    if d.is_zero() {
        return Err(ParseRationalError);
    }
    Ok(BigRational::new(n, d))
}

/// True when `s` is already the canonical spelling of the rational it denotes.
pub fn is_canonical_rational(s: &str) -> bool {
    match parse_rational(s) {
        Ok(r) => rational_to_string(&r) == s,
        Err(_) => false,
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", rational_to_string(&self.re)),
            (true, false) => write!(f, "{}i", rational_to_string(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "({}{}{}i)",
                    rational_to_string(&self.re),
                    sign,
                    rational_to_string(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a C> for &'a C {
    type Output = C;
    fn add(self, o: &C) -> C {
        C { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a C> for &'a C {
    type Output = C;
    fn sub(self, o: &C) -> C {
        C { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a C> for &'a C {
    type Output = C;
    fn mul(self, o: &C) -> C {
        if self.im.is_zero() && o.im.is_zero() {
            return C { re: &self.re * &o.re, im: BigRational::zero() };
        }
        C {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a C> for &'a C {
    type Output = C;
    fn div(self, o: &C) -> C {
        self * &o.inv().expect("division by zero")
    }
}

impl Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        &self + &o
    }
}

impl Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        &self - &o
    }
}

impl Mul for C {
    type Output = C;
    fn mul(self, o: C) -> C {
        &self * &o
    }
}

impl Div for C {
    type Output = C;
    fn div(self, o: C) -> C {
        &self / &o
    }
}

impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        C { re: -self.re, im: -self.im }
    }
}

impl<'a> Neg for &'a C {
    type Output = C;
    fn neg(self) -> C {
        C { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl<'a> AddAssign<&'a C> for C {
    fn add_assign(&mut self, o: &C) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl<'a> SubAssign<&'a C> for C {
    fn sub_assign(&mut self, o: &C) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl<'a> MulAssign<&'a C> for C {
    fn mul_assign(&mut self, o: &C) {
        *self = &*self * o;
    }
}

impl From<i64> for C {
    fn from(n: i64) -> C {
        C::int(n)
    }
}
