use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rank::series_det;
use crate::series::Series;

use super::manifold::{DefiningData, GeneratorForm, GenericSubmanifoldNF};
use crate::tuple::SeriesTuple;

/// `Σ a_j ∂/∂Z_j + Σ b_j ∂/∂ζ_j` on the ambient ring `(Z, ζ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalVectorField {
    pub coeffs: Vec<Series>,
}

impl FormalVectorField {
    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, f: &Series) -> Series {
        let n = self.coeffs.len();
        let mut acc = Series::zero(n, f.prec().saturating_sub(1));
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = &acc + &(a * &f.derive(i, 1));
        }
        acc
    }

    /// Applies `self` `k` times.
    pub fn apply_pow(&self, f: &Series, k: u32) -> Series {
        let mut g = f.clone();
        for _ in 0..k {
            g = self.apply(&g);
        }
        g
    }

    /// No `∂/∂Z` components.
    pub fn is_type_01(&self) -> bool {
        self.coeffs[..self.nvars() / 2].iter().all(|c| c.is_zero())
    }

    /// No `∂/∂ζ` components.
    pub fn is_type_10(&self) -> bool {
        self.coeffs[self.nvars() / 2..].iter().all(|c| c.is_zero())
    }

    /// Coefficients restricted to `Z = 0`.
    pub fn at_z_zero(&self) -> FormalVectorField {
        let half: Vec<usize> = (0..self.nvars() / 2).collect();
        FormalVectorField { coeffs: self.coeffs.iter().map(|c| c.set_zero(&half)).collect() }
    }
}

/// `L_j = ∂/∂χ_j + Σ_l Q̄_{l,χ_j}(χ, z, w) ∂/∂τ_l`.
pub fn cr_basis(m: &GenericSubmanifoldNF) -> Vec<FormalVectorField> {
    let ly = m.layout();
    let amb = ly.ambient();
    let p = m.prec();
    let qbar = m.q_bar_ambient();
    (0..ly.n)
        .map(|j| {
            let mut coeffs: Vec<Series> = (0..amb).map(|_| Series::zero(amb, p.saturating_sub(1))).collect();
            coeffs[ly.chi(j)] = Series::one(amb, p.saturating_sub(1));
            for l in 0..ly.d {
                coeffs[ly.tau(l)] = qbar[l].derive(ly.chi(j), 1);
            }
            FormalVectorField { coeffs }
        })
        .collect()
}

/// Inverse of a square series matrix whose value at the origin is invertible.
pub fn invert_series_matrix(m: &[Vec<Series>]) -> Result<Vec<Vec<Series>>> {
    let k = m.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let det = series_det(m);
    let inv = det.invert_unit().map_err(|_| Error::SingularJacobian)?;
    let mut out = alloc::vec![alloc::vec![Series::zero(m[0][0].nvars(), det.prec()); k]; k];
    for i in 0..k {
        for j in 0..k {
            // adj[i][j] = (-1)^{i+j} det(m without row j, column i)
            let cof = if k == 1 {
                Series::one(m[0][0].nvars(), det.prec())
            } else {
                let minor: Vec<Vec<Series>> = (0..k)
                    .filter(|&r| r != j)
                    .map(|r| (0..k).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                    .collect();
                series_det(&minor)
            };
            let cof = if (i + j) % 2 == 1 { -&cof } else { cof };
            out[i][j] = &cof * &inv;
        }
    }
    Ok(out)
}

/// A `ζ″` block with `ρ_{ζ″}(0)` invertible, preferring the trailing coordinates.
fn zeta_second(dd: &DefiningData) -> Result<Vec<usize>> {
    let nn = dd.big_n();
    let d = dd.d();
    let dz = dd.dzeta_at_zero();
    let sub = |cols: &[usize]| -> Vec<Vec<C>> { dz.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect() };
    let trailing: Vec<usize> = (nn - d..nn).collect();
    if !linalg::det(&sub(&trailing)).is_zero() {
        return Ok(trailing);
    }
    let (rows, cols) = linalg::maximal_minor(&dz);
    if rows.len() < d {
        return Err(Error::SingularJacobian);
    }
    Ok(cols)
}

/// Fields `∂_x + Σ_k c_k ∂/∂ζ″_k` with the `c_k` chosen so every `ρ_l` is annihilated.
fn solved_fields(dd: &DefiningData, xs: &[usize]) -> Result<Vec<FormalVectorField>> {
    let second = zeta_second(dd)?;
    solved_fields_for(dd.rho(), dd.big_n(), &second, xs)
}

fn solved_fields_for(rho: &SeriesTuple, nn: usize, second: &[usize], xs: &[usize]) -> Result<Vec<FormalVectorField>> {
    let amb = 2 * nn;
    let a: Vec<Vec<Series>> = rho.iter().map(|r| second.iter().map(|&k| r.derive(nn + k, 1)).collect()).collect();
    let ainv = invert_series_matrix(&a)?;
    let p = rho.prec().saturating_sub(1);
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let b: Vec<Series> = rho.iter().map(|r| r.derive(x, 1)).collect();
        let mut coeffs: Vec<Series> = (0..amb).map(|_| Series::zero(amb, p)).collect();
        coeffs[x] = Series::one(amb, p);
        for (kk, &k) in second.iter().enumerate() {
            let mut c = Series::zero(amb, p);
            for (l, bl) in b.iter().enumerate() {
                c = &c - &(&ainv[kk][l] * bl);
            }
            coeffs[nn + k] = c;
        }
        out.push(FormalVectorField { coeffs });
    }
    Ok(out)
}

/// A CR basis `L_j = ∂/∂ζ′_j - ρ_{ζ′_j}(ρ_{ζ″})^{-1} ∂/∂ζ″` in general coordinates.
pub fn cr_basis_defining(dd: &DefiningData) -> Result<Vec<FormalVectorField>> {
    let nn = dd.big_n();
    let second = zeta_second(dd)?;
    let first: Vec<usize> = (0..nn).filter(|k| !second.contains(k)).map(|k| nn + k).collect();
    solved_fields(dd, &first)
}

/// `S_j = ∂/∂Z_j - ρ_{Z_j}(ρ_{ζ″})^{-1} ∂/∂ζ″`, `j = 1..N`.
pub fn tangential_frame(dd: &DefiningData) -> Result<Vec<FormalVectorField>> {
    let xs: Vec<usize> = (0..dd.big_n()).collect();
    solved_fields(dd, &xs)
}

/// The frame `S_j` built from the generators `w − Q(z, χ, τ)` with `ζ″ = τ`.
pub fn tangential_frame_nf(m: &GenericSubmanifoldNF) -> Result<Vec<FormalVectorField>> {
    let ly = m.layout();
    let nn = ly.big_n();
    let rho = m.generators(GeneratorForm::Holo);
    let second: Vec<usize> = (ly.n..nn).collect();
    let xs: Vec<usize> = (0..nn).collect();
    solved_fields_for(&rho, nn, &second, &xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> GenericSubmanifoldNF {
        let q = Series::from_terms(3, 8, [(alloc::vec![0, 0, 1], C::one()), (alloc::vec![1, 1, 0], C::gauss(0, 2))]);
        GenericSubmanifoldNF::new(1, 1, SeriesTuple::new(alloc::vec![q]).unwrap()).unwrap()
    }

    fn heis_rho() -> DefiningData {
        let r = Series::from_terms(
            4,
            8,
            [
                (alloc::vec![0, 1, 0, 0], C::ratio(-1, 2) * C::i()),
                (alloc::vec![0, 0, 0, 1], C::ratio(1, 2) * C::i()),
                (alloc::vec![1, 0, 1, 0], C::int(-1)),
            ],
        );
        DefiningData::new(2, SeriesTuple::new(alloc::vec![r]).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_cr_field() {
        let m = heis();
        let l = &cr_basis(&m)[0];
        assert!(l.is_type_01());
        assert_eq!(l.coeffs[2], Series::one(4, 7));
        assert_eq!(l.coeffs[3], Series::from_terms(4, 7, [(alloc::vec![1, 0, 0, 0], C::gauss(0, -2))]));
        let anti = m.generators(GeneratorForm::Antiholo);
        assert!(l.apply(&anti[0]).is_zero());
        let holo = m.generators(GeneratorForm::Holo);
        assert!(m.contains(&l.apply(&holo[0])).unwrap());
    }

    #[test]
    fn general_coordinates_cr_field() {
        let dd = heis_rho();
        let l = &cr_basis_defining(&dd).unwrap()[0];
        assert_eq!(l.coeffs[2], Series::one(4, 7));
        assert_eq!(l.coeffs[3], Series::from_terms(4, 7, [(alloc::vec![1, 0, 0, 0], C::gauss(0, -2))]));
        assert!(l.apply(&dd.rho()[0]).is_zero());
    }

    #[test]
    fn heisenberg_tangential_frame() {
        let dd = heis_rho();
        let s = tangential_frame(&dd).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].coeffs[0], Series::one(4, 7));
        assert_eq!(s[0].coeffs[3], Series::from_terms(4, 7, [(alloc::vec![0, 0, 1, 0], C::gauss(0, -2))]));
        for f in &s {
            assert!(f.apply(&dd.rho()[0]).is_zero());
        }
        let z2 = Series::from_terms(4, 8, [(alloc::vec![2, 0, 0, 0], C::one())]);
        assert_eq!(s[0].apply_pow(&z2, 2), Series::constant(4, 6, C::int(2)));
    }

    #[test]
    fn matrix_inverse() {
        let x = Series::var(2, 5, 0);
        let one = Series::one(2, 5);
        let m = alloc::vec![alloc::vec![&one + &x, x.clone()], alloc::vec![Series::var(2, 5, 1), one.clone()]];
        let inv = invert_series_matrix(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Series::zero(2, 5);
                for k in 0..2 {
                    acc = &acc + &(&m[i][k] * &inv[k][j]);
                }
                let e = if i == j { one.clone() } else { Series::zero(2, 5) };
                assert_eq!(acc, e);
            }
        }
    }
}
