use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: lower total degree first, then by
/// exponent vector with larger leading exponents first (`x^2 < xy < y^2`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn from_slice(e: &[u32]) -> Self {
        MultiIndex(e.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self - o` when componentwise nonnegative.
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn scale(&self, k: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self <= o`.
    pub fn divides(&self, o: &MultiIndex) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `α!` as a product of factorials.
    pub fn factorial(&self) -> num_bigint::BigInt {
        let mut acc = num_bigint::BigInt::from(1u32);
        for &e in &self.0 {
            for k in 2..=e {
                acc *= k;
            }
        }
        acc
    }

    /// Plain lexicographic comparison, the order used by the jet inductions.
    pub fn lex_cmp(&self, o: &MultiIndex) -> Ordering {
        self.0.cmp(&o.0)
    }

    /// All exponent vectors in `n` variables of total degree exactly `d`,
    /// in ascending graded-lex order.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }

    /// All exponent vectors of total degree at most `d`, graded-lex ascending.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| Self::of_degree(n, k)).collect()
    }

    /// Componentwise box `lo <= β <= hi`, graded-lex ascending.
    pub fn in_box(lo: &MultiIndex, hi: &MultiIndex) -> Vec<MultiIndex> {
        let n = lo.len();
        let mut out = Vec::new();
        let mut cur = lo.0.clone();
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if cur[i] < hi.0[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo.0[i];
            }
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
