use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::linalg::{Echelon, SparseVec};
use crate::multi::MultiIndex;
use crate::tuple::SeriesTuple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaircaseStatus {
    /// Every monomial of degree `level` lies in the ideal; `basis` spans the quotient.
    Finite { codim: usize, basis: Vec<MultiIndex>, level: u32 },
    UndeterminedUpTo(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseReport {
    pub status: StaircaseStatus,
    /// Minimal leading monomials found through the bound.
    pub corners: Vec<MultiIndex>,
    pub bound: u32,
}

impl StaircaseReport {
    pub fn is_finite(&self) -> bool {
        matches!(self.status, StaircaseStatus::Finite { .. })
    }

    pub fn codim(&self) -> Option<usize> {
        match &self.status {
            StaircaseStatus::Finite { codim, .. } => Some(*codim),
            StaircaseStatus::UndeterminedUpTo(_) => None,
        }
    }
}

/// Codimension of the ideal generated by `generators`, read off a monomial
/// staircase computed degree by degree up to `degree_bound`.
///
/// Leading monomials are taken largest first in graded-lex order, so the
/// non-leading monomials below the captured level form a cobasis.
pub fn staircase_codim(generators: &SeriesTuple, degree_bound: u32) -> StaircaseReport {
    let n = generators.nvars();
    let b = degree_bound.min(generators.prec());
    let mut monos = MultiIndex::up_to_degree(n, b);
    monos.reverse();
    let col: BTreeMap<MultiIndex, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    let mut ech = Echelon::new();
    for g in generators.iter() {
        let ord = match g.order() {
            Some(o) if o <= b => o,
            _ => continue,
        };
        for a in MultiIndex::up_to_degree(n, b - ord) {
            let v: SparseVec = g
                .terms()
                .iter()
                .filter_map(|(m, c)| {
                    let p = m.add(&a);
                    col.get(&p).map(|&i| (i, c.clone()))
                })
                .collect();
            ech.insert(&v);
        }
    }

    let lead: Vec<MultiIndex> = ech.pivot_columns().map(|&i| monos[i].clone()).collect();
    let mut corners: Vec<MultiIndex> = lead
        .iter()
        .filter(|m| !lead.iter().any(|o| o != *m && o.divides(m)))
        .cloned()
        .collect();
    corners.sort();

    let level_full = |d: u32| MultiIndex::of_degree(n, d).iter().all(|m| ech.has_pivot(col[m]));
    let mut status = StaircaseStatus::UndeterminedUpTo(b);
    for m in 0..b {
        if (m..=b).all(level_full) {
            let basis: Vec<MultiIndex> =
                MultiIndex::up_to_degree(n, m).into_iter().filter(|x| !ech.has_pivot(col[x])).collect();
            status = StaircaseStatus::Finite { codim: basis.len(), basis, level: m };
            break;
        }
    }
    StaircaseReport { status, corners, bound: b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::C;
    use crate::series::Series;

    fn s(n: usize, p: u32, t: &[(&[u32], i64)]) -> Series {
        Series::from_terms(n, p, t.iter().map(|(e, c)| (e.to_vec(), C::int(*c))))
    }

    #[test]
    fn monomial_ideal() {
        let g = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[1, 0], 1)]), s(2, 8, &[(&[0, 2], 1)])]).unwrap();
        let r = staircase_codim(&g, 8);
        match r.status {
            StaircaseStatus::Finite { codim, basis, level } => {
                assert_eq!(codim, 2);
                assert_eq!(basis, alloc::vec![MultiIndex::zero(2), MultiIndex::from_slice(&[0, 1])]);
                assert_eq!(level, 2);
            }
            other => panic!("{:?}", other),
        }
        assert_eq!(r.corners, alloc::vec![MultiIndex::from_slice(&[1, 0]), MultiIndex::from_slice(&[0, 2])]);
    }

    #[test]
    fn product_never_captured() {
        let g = SeriesTuple::new(alloc::vec![s(2, 8, &[(&[1, 1], 1)])]).unwrap();
        for b in 1..=8 {
            assert_eq!(staircase_codim(&g, b).status, StaircaseStatus::UndeterminedUpTo(b));
        }
    }

    #[test]
    fn unit_multiple_of_coordinate() {
        // z - z^2 = z (1 - z), so the ideal is (z)
        let g = SeriesTuple::new(alloc::vec![s(1, 8, &[(&[1], 1), (&[2], -1)])]).unwrap();
        let r = staircase_codim(&g, 8);
        assert_eq!(r.codim(), Some(1));
        assert_eq!(
            r.status,
            StaircaseStatus::Finite { codim: 1, basis: alloc::vec![MultiIndex::zero(1)], level: 1 }
        );
    }

    #[test]
    fn raising_the_bound_is_stable() {
        // (z1^2 + z2^3, z2^2 - z1 z2): finite, check across bounds
        let g = SeriesTuple::new(alloc::vec![
            s(2, 10, &[(&[2, 0], 1), (&[0, 3], 1)]),
            s(2, 10, &[(&[0, 2], 1), (&[1, 1], -1)]),
        ])
        .unwrap();
        let first = staircase_codim(&g, 6);
        assert!(first.is_finite());
        for b in 7..=10 {
            assert_eq!(staircase_codim(&g, b).status, first.status);
        }
    }
}
