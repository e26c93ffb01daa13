use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::coeff::C;
use crate::linalg;
use crate::series::Series;
use crate::tuple::SeriesTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Sample,
    Symbolic,
}

/// A nonzero minor of the Jacobian at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorCertificate {
    pub point: Vec<C>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deficiency {
    /// Rank equals the smaller matrix dimension; nothing to certify.
    None,
    /// Every sampled point gave at most the reported rank.
    Probabilistic,
    /// All minors one size larger vanish through the stated order.
    Certified { order: u32 },
    /// Symbolic check found a nonvanishing larger minor (sampling missed it).
    Refuted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub target: usize,
    pub certificate: Option<MinorCertificate>,
    pub deficiency: Deficiency,
    pub samples_used: usize,
}

pub const SAMPLE_RETRIES: usize = 8;

/// Deterministic source of small-denominator rational points.
pub struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn coordinate(&mut self) -> C {
        let num = (self.rng.next_u32() % 19) as i64 - 9;
        let den = (self.rng.next_u32() % 4) as i64 + 1;
        let num = if num == 0 { 1 } else { num };
        C::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn point(&mut self, n: usize) -> Vec<C> {
        (0..n).map(|_| self.coordinate()).collect()
    }
}

pub fn eval_matrix(m: &[Vec<Series>], point: &[C]) -> Vec<Vec<C>> {
    m.iter().map(|r| r.iter().map(|s| s.eval(point)).collect()).collect()
}

fn minor_at(m: &[Vec<C>], rows: &[usize], cols: &[usize]) -> C {
    let sub: Vec<Vec<C>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
    linalg::det(&sub)
}

/// Re-evaluates a certificate from scratch.
pub fn recheck_certificate(map: &SeriesTuple, cert: &MinorCertificate) -> bool {
    let jac = map.jacobian();
    let vals = eval_matrix(&jac, &cert.point);
    let m = minor_at(&vals, &cert.rows, &cert.cols);
    !m.is_zero() && m == cert.minor
}

/// Determinant of a square matrix of series by Laplace expansion.
pub fn series_det(m: &[Vec<Series>]) -> Series {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    }
    let mut acc: Option<Series> = None;
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Series>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, s)| s.clone()).collect())
            .collect();
        let t = &m[0][j] * &series_det(&minor);
        let t = if j % 2 == 1 { -&t } else { t };
        acc = Some(match acc {
            None => t,
            Some(a) => &a + &t,
        });
    }
    acc.unwrap_or_else(|| {
        let p = m.iter().flatten().map(|s| s.prec()).min().unwrap_or(0);
        Series::zero(m[0][0].nvars(), p)
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Finds a `(k × k)` minor of the series Jacobian that does not vanish through precision.
pub fn nonvanishing_minor(jac: &[Vec<Series>], k: usize) -> Option<(Vec<usize>, Vec<usize>, Series)> {
    let nr = jac.len();
    let nc = jac.first().map(|r| r.len()).unwrap_or(0);
    for rows in subsets(nr, k) {
        for cols in subsets(nc, k) {
            let sub: Vec<Vec<Series>> =
                rows.iter().map(|&i| cols.iter().map(|&j| jac[i][j].clone()).collect()).collect();
            let d = series_det(&sub);
            if !d.is_zero() {
                return Some((rows, cols, d));
            }
        }
    }
    None
}

/// Generic rank of the Jacobian of a truncated map.
pub fn generic_rank(map: &SeriesTuple, mode: RankMode, seed: u64) -> RankReport {
    let jac = map.jacobian();
    let nr = map.len();
    let nc = map.nvars();
    let target = nr.min(nc);
    let mut sampler = PointSampler::new(seed);
    let mut best = 0usize;
    let mut cert = None;
    let mut used = 0;
    if target > 0 {
        for _ in 0..SAMPLE_RETRIES {
            used += 1;
            let pt = sampler.point(nc);
            let vals = eval_matrix(&jac, &pt);
            let (rows, cols) = linalg::maximal_minor(&vals);
            if rows.len() > best {
                best = rows.len();
                let minor = minor_at(&vals, &rows, &cols);
                cert = Some(MinorCertificate { point: pt, rows, cols, minor });
            }
            if best == target {
                break;
            }
        }
    }
    let deficiency = if best == target {
        Deficiency::None
    } else {
        match mode {
            RankMode::Sample => Deficiency::Probabilistic,
            RankMode::Symbolic => match nonvanishing_minor(&jac, best + 1) {
                None => Deficiency::Certified { order: map.prec().saturating_sub(1) },
                Some(_) => Deficiency::Refuted,
            },
        }
    };
    RankReport { rank: best, target, certificate: cert, deficiency, samples_used: used }
}
