//! Exact sparse linear algebra over Gaussian rationals.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::C;

pub type SparseVec = BTreeMap<usize, C>;

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &usize> {
        self.pivots.keys()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let cols: Vec<usize> = v.keys().copied().filter(|c| self.pivots.contains_key(c)).collect();
        for c in cols {
            let f = match v.get(&c) {
                Some(f) => f.clone(),
                None => continue,
            };
            let row = &self.pivots[&c];
            for (k, a) in row {
                let e = v.entry(*k).or_insert_with(C::zero);
                *e -= &(a * &f);
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    /// Inserts a row; returns true when it was independent of the existing rows.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let (&p, lead) = match r.iter().next() {
            Some((p, lead)) => (p, lead.clone()),
            None => return false,
        };
        let inv = lead.inv().expect("nonzero pivot");
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        for row in self.pivots.values_mut() {
            if let Some(f) = row.get(&p).cloned() {
                for (k, a) in &r {
                    let e = row.entry(*k).or_insert_with(C::zero);
                    *e -= &(a * &f);
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
            }
        }
        self.pivots.insert(p, r);
        true
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.pivots.iter()
    }
}

/// Solves `A x = b` for rows of `A` given sparsely; free unknowns are set to 0.
pub fn solve(rows: &[SparseVec], rhs: &[C], ncols: usize) -> Option<Vec<C>> {
    let mut ech = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut v = r.clone();
        if !b.is_zero() {
            v.insert(ncols, b.clone());
        }
        ech.insert(&v);
    }
    if ech.has_pivot(ncols) {
        return None;
    }
    let mut x = vec![C::zero(); ncols];
    for (&p, row) in ech.rows() {
        if let Some(b) = row.get(&ncols) {
            x[p] = b.clone();
        }
    }
    Some(x)
}

/// A basis of `{x : A x = 0}`.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<Vec<C>> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    let mut out = Vec::new();
    for f in 0..ncols {
        if ech.has_pivot(f) {
            continue;
        }
        let mut x = vec![C::zero(); ncols];
        x[f] = C::one();
        for (&p, row) in ech.rows() {
            if let Some(a) = row.get(&f) {
                x[p] = -a;
            }
        }
        out.push(x);
    }
    out
}

pub fn to_sparse(row: &[C]) -> SparseVec {
    row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn rank(m: &[Vec<C>]) -> usize {
    let mut ech = Echelon::new();
    for r in m {
        ech.insert(&to_sparse(r));
    }
    ech.rank()
}

/// Determinant by Gaussian elimination over the field.
pub fn det(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut d = C::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return C::zero(),
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d = &d * &p;
        let inv = p.inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for k in col..n {
                let t = &a[col][k] * &f;
                a[r][k] -= &t;
            }
        }
    }
    d
}

/// Rows and columns of a maximal nonsingular minor.
pub fn maximal_minor(m: &[Vec<C>]) -> (Vec<usize>, Vec<usize>) {
    let mut rows = Vec::new();
    let mut ech = Echelon::new();
    for (i, r) in m.iter().enumerate() {
        if ech.insert(&to_sparse(r)) {
            rows.push(i);
        }
    }
    let mut cols: Vec<usize> = ech.pivot_columns().copied().collect();
    cols.sort();
    (rows, cols)
}
