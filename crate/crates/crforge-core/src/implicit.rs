use alloc::vec::Vec;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::linalg;
use crate::series::Series;
use crate::tuple::SeriesTuple;

/// Solves `system(x, y(x)) ≡ 0` for the variables listed in `solve_for`.
///
/// The remaining variables keep their relative order and become the
/// variables of the result. Each Newton-type step with the frozen Jacobian
/// at the origin gains one order.
pub fn implicit_solve(system: &SeriesTuple, solve_for: &[usize]) -> Result<SeriesTuple> {
    let d = solve_for.len();
    if system.len() != d {
        return Err(Error::ArityMismatch { expected: d, got: system.len() });
    }
    let nv = system.nvars();
    let free: Vec<usize> = (0..nv).filter(|i| !solve_for.contains(i)).collect();
    let m = free.len();
    let p = system.prec();
    for (j, f) in system.iter().enumerate() {
        if !f.constant_term().is_zero() {
            return Err(Error::NonzeroConstant { component: j });
        }
    }
    let zero = alloc::vec![C::zero(); nv];
    let jac: Vec<Vec<C>> = system
        .iter()
        .map(|f| solve_for.iter().map(|&y| f.derive(y, 1).eval(&zero)).collect())
        .collect();
    let inv = invert_matrix(&jac).ok_or(Error::SingularJacobian)?;

    let mut y: Vec<Series> = (0..d).map(|_| Series::zero(m, p)).collect();
    for _ in 0..=p + 1 {
        let mut subs: Vec<Series> = alloc::vec![Series::zero(m, p); nv];
        for (k, &v) in free.iter().enumerate() {
            subs[v] = Series::var(m, p, k);
        }
        for (k, &v) in solve_for.iter().enumerate() {
            subs[v] = y[k].clone();
        }
        let subs = SeriesTuple::new(subs)?;
        let resid: Vec<Series> =
            system.iter().map(|f| f.compose(&subs)).collect::<Result<Vec<_>>>()?;
        if resid.iter().all(|r| r.is_zero()) {
            break;
        }
        for k in 0..d {
            let mut corr = Series::zero(m, p);
            for (l, r) in resid.iter().enumerate() {
                corr = &corr + &r.scale(&inv[k][l]);
            }
            y[k] = &y[k] - &corr;
        }
    }
    SeriesTuple::new(y)
}

/// Inverse of a square constant matrix.
pub fn invert_matrix(a: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = a.len();
    let rows: Vec<linalg::SparseVec> = a.iter().map(|r| linalg::to_sparse(r)).collect();
    if linalg::rank(a) < n {
        return None;
    }
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = alloc::vec![C::zero(); n];
        e[k] = C::one();
        cols.push(linalg::solve(&rows, &e, n)?);
    }
    Some((0..n).map(|i| (0..n).map(|k| cols[k][i].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_in_w() {
        // variables (z, chi, tau, w): w - tau - 2i z chi
        let f = Series::from_terms(
            4,
            4,
            [
                (alloc::vec![0, 0, 0, 1], C::one()),
                (alloc::vec![0, 0, 1, 0], C::int(-1)),
                (alloc::vec![1, 1, 0, 0], C::gauss(0, -2)),
            ],
        );
        let sol = implicit_solve(&SeriesTuple::new(alloc::vec![f]).unwrap(), &[3]).unwrap();
        let expect = Series::from_terms(
            3,
            4,
            [(alloc::vec![0, 0, 1], C::one()), (alloc::vec![1, 1, 0], C::gauss(0, 2))],
        );
        assert_eq!(sol[0], expect);
    }

    #[test]
    fn quadratic_fixed_point() {
        // (x, y): y - x - y^2; oracle iterates y <- x + y^2
        let f = Series::from_terms(
            2,
            3,
            [(alloc::vec![0, 1], C::one()), (alloc::vec![1, 0], C::int(-1)), (alloc::vec![0, 2], C::int(-1))],
        );
        let sol = implicit_solve(&SeriesTuple::new(alloc::vec![f]).unwrap(), &[1]).unwrap();
        let x = Series::var(1, 3, 0);
        let mut y = Series::zero(1, 3);
        for _ in 0..4 {
            y = &x + &(&y * &y);
        }
        assert_eq!(sol[0], y);
        assert_eq!(
            y,
            Series::from_terms(1, 3, [(alloc::vec![1], C::one()), (alloc::vec![2], C::one()), (alloc::vec![3], C::int(2))])
        );
    }

    #[test]
    fn trivial_and_singular() {
        let f = Series::from_terms(2, 3, [(alloc::vec![0, 1], C::one()), (alloc::vec![1, 0], C::int(-1))]);
        let sol = implicit_solve(&SeriesTuple::new(alloc::vec![f]).unwrap(), &[1]).unwrap();
        assert_eq!(sol[0], Series::var(1, 3, 0));
        let g = Series::from_terms(2, 3, [(alloc::vec![0, 2], C::one()), (alloc::vec![1, 0], C::int(-1))]);
        assert_eq!(
            implicit_solve(&SeriesTuple::new(alloc::vec![g]).unwrap(), &[1]).unwrap_err(),
            Error::SingularJacobian
        );
    }
}
