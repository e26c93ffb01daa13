use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::coeff::C;
use crate::linalg::{self, SparseVec};
use crate::multi::MultiIndex;
use crate::series::Series;

use super::SeriesIdeal;

/// Cofactors `c_k` with `Σ c_k g_k ≡ f` through `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct MemberWitness {
    pub cofactors: Vec<Series>,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member(MemberWitness),
    NotFound,
}

impl Membership {
    pub fn witness(&self) -> Option<&MemberWitness> {
        match self {
            Membership::Member(w) => Some(w),
            Membership::NotFound => None,
        }
    }

    pub fn is_member(&self) -> bool {
        self.witness().is_some()
    }
}

impl MemberWitness {
    /// Recomputes `Σ c_k g_k - f` and checks it through the stated order.
    pub fn verify(&self, f: &Series, ideal: &SeriesIdeal) -> bool {
        if self.cofactors.len() != ideal.generators().len() {
            return false;
        }
        let mut acc = -&f.truncate(self.order);
        for (c, g) in self.cofactors.iter().zip(ideal.generators().iter()) {
            acc = &acc + &(c * &g.truncate(self.order));
        }
        acc.is_zero_through(self.order)
    }
}

/// Searches for cofactors of total degree at most `cofactor_degree`.
///
/// A `NotFound` answer only says that no cofactors of that degree exist.
pub fn membership_bounded(f: &Series, ideal: &SeriesIdeal, cofactor_degree: u32) -> Membership {
    let gens = ideal.generators();
    let n = ideal.nvars();
    if f.nvars() != n {
        return Membership::NotFound;
    }
    let d = f.prec().min(ideal.prec());
    let gmax = gens.iter().map(|g| g.max_degree()).max().unwrap_or(0);
    let order = d.min(cofactor_degree + gmax);
    let cdeg = cofactor_degree.min(order);

    let monos = MultiIndex::up_to_degree(n, cdeg);
    let mut row_of: BTreeMap<MultiIndex, usize> = BTreeMap::new();
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut row_for = |m: MultiIndex, rows: &mut Vec<SparseVec>| -> usize {
        let next = rows.len();
        *row_of.entry(m).or_insert_with(|| {
            rows.push(SparseVec::new());
            next
        })
    };

    let mut unknown = 0usize;
    for g in gens.iter() {
        for a in &monos {
            for (m, c) in g.terms() {
                let prod = m.add(a);
                if prod.degree() > order {
                    continue;
                }
                let r = row_for(prod, &mut rows);
                rows[r].insert(unknown, c.clone());
            }
            unknown += 1;
        }
    }
    let mut rhs = alloc::vec![C::zero(); rows.len()];
    for (m, c) in f.terms() {
        if m.degree() > order {
            continue;
        }
        let r = row_for(m.clone(), &mut rows);
        if r >= rhs.len() {
            rhs.push(C::zero());
        }
        rhs[r] = c.clone();
    }
    let sol = match linalg::solve(&rows, &rhs, unknown) {
        Some(s) => s,
        None => return Membership::NotFound,
    };
    let mut cofactors = Vec::with_capacity(gens.len());
    let mut k = 0;
    for _ in gens.iter() {
        let mut c = Series::zero(n, order);
        for a in &monos {
            c.add_term(a.clone(), sol[k].clone());
            k += 1;
        }
        cofactors.push(c);
    }
    Membership::Member(MemberWitness { cofactors, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuple::SeriesTuple;

    fn s(n: usize, p: u32, t: &[(&[u32], i64)]) -> Series {
        Series::from_terms(n, p, t.iter().map(|(e, c)| (e.to_vec(), C::int(*c))))
    }

    fn ideal(g: Vec<Series>) -> SeriesIdeal {
        SeriesIdeal::new(SeriesTuple::new(g).unwrap()).unwrap()
    }

    #[test]
    fn multiple_of_generator() {
        // variables (z, w); g = w + z^2, f = z g
        let g = s(2, 6, &[(&[0, 1], 1), (&[2, 0], 1)]);
        let z = Series::var(2, 6, 0);
        let f = &z * &g;
        let i = ideal(alloc::vec![g]);
        let w = membership_bounded(&f, &i, 2);
        let wit = w.witness().unwrap();
        assert!(wit.verify(&f, &i));
        assert!(wit.cofactors[0].eq_through(&z, wit.order));
    }

    #[test]
    fn unit_is_never_found() {
        let i = ideal(alloc::vec![Series::var(1, 8, 0)]);
        for b in 0..6 {
            assert_eq!(membership_bounded(&Series::one(1, 8), &i, b), Membership::NotFound);
        }
    }

    #[test]
    fn quartic_in_quadric_ideal() {
        // variables (u, v1, v2)
        let g1 = s(3, 8, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]);
        let g2 = s(3, 8, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)]);
        let f = s(3, 8, &[(&[0, 4, 0], 1), (&[3, 1, 0], 1)]);
        let i = ideal(alloc::vec![g1.clone(), g2.clone()]);
        let w = membership_bounded(&f, &i, 2);
        let wit = w.witness().unwrap();
        assert_eq!(wit.order, 4);
        assert!(wit.verify(&f, &i));
        let full = membership_bounded(&f, &i, 6);
        assert_eq!(full.witness().unwrap().order, 8);
        assert!(full.witness().unwrap().verify(&f, &i));
        // hand cofactors: (v1^2 - u v2) g1 + u^2 g2
        let c1 = s(3, 8, &[(&[0, 2, 0], 1), (&[1, 0, 1], -1)]);
        let c2 = s(3, 8, &[(&[2, 0, 0], 1)]);
        assert!((&(&c1 * &g1) + &(&c2 * &g2)).eq_through(&f, 8));
    }
}
