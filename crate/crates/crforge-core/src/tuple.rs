use alloc::vec::Vec;
use core::ops::Index;

use crate::coeff::C;
use crate::error::{Error, Result};
use crate::series::Series;

/// An ordered list of series over one shared variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTuple {
    components: Vec<Series>,
    nvars: usize,
}

impl SeriesTuple {
    /// Builds a tuple, checking that all components share `nvars`.
    /// Components keep their own precision; use [`SeriesTuple::prec`] for the shared one.
    pub fn new(components: Vec<Series>) -> Result<Self> {
        let nvars = components.first().map(|s| s.nvars()).unwrap_or(0);
        for s in &components {
            if s.nvars() != nvars {
                return Err(Error::VarCountMismatch { left: nvars, right: s.nvars() });
            }
        }
        Ok(SeriesTuple { components, nvars })
    }

    pub fn empty(nvars: usize) -> Self {
        SeriesTuple { components: Vec::new(), nvars }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        SeriesTuple { components: (0..n).map(|i| Series::var(n, prec, i)).collect(), nvars: n }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Shared validity order (the minimum over components).
    pub fn prec(&self) -> u32 {
        self.components.iter().map(|s| s.prec()).min().unwrap_or(0)
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Series> {
        self.components.iter()
    }

    pub fn push(&mut self, s: Series) {
        assert_eq!(s.nvars(), self.nvars);
        self.components.push(s);
    }

    pub fn into_vec(self) -> Vec<Series> {
        self.components
    }

    /// Truncates every component to the shared precision.
    pub fn uniform(&self) -> Self {
        let p = self.prec();
        SeriesTuple {
            components: self.components.iter().map(|s| s.truncate(p)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn truncate(&self, p: u32) -> Self {
        SeriesTuple {
            components: self.components.iter().map(|s| s.truncate(p)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn compose(&self, subs: &SeriesTuple) -> Result<Self> {
        let comps = self.components.iter().map(|s| s.compose(subs)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesTuple { components: comps, nvars: subs.nvars() })
    }

    pub fn bar_conjugate(&self) -> Self {
        SeriesTuple {
            components: self.components.iter().map(|s| s.bar_conjugate()).collect(),
            nvars: self.nvars,
        }
    }

    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Self {
        SeriesTuple {
            components: self.components.iter().map(|s| s.remap(new_nvars, map)).collect(),
            nvars: new_nvars,
        }
    }

    pub fn concat(&self, o: &SeriesTuple) -> Result<Self> {
        if !self.is_empty() && !o.is_empty() && self.nvars != o.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: o.nvars });
        }
        let nvars = if self.is_empty() { o.nvars } else { self.nvars };
        let mut v = self.components.clone();
        v.extend(o.components.iter().cloned());
        Ok(SeriesTuple { components: v, nvars })
    }

    /// Sets the variable count of an empty tuple; no effect otherwise.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        if self.components.is_empty() {
            self.nvars = nvars;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|s| s.is_zero())
    }

    pub fn eval(&self, point: &[C]) -> Vec<C> {
        self.components.iter().map(|s| s.eval(point)).collect()
    }

    /// Jacobian matrix of series, `rows = components`, `cols = variables`.
    pub fn jacobian(&self) -> Vec<Vec<Series>> {
        self.components
            .iter()
            .map(|s| (0..self.nvars).map(|k| s.derive(k, 1)).collect())
            .collect()
    }

    pub fn has_zero_constants(&self) -> bool {
        self.components.iter().all(|s| s.constant_term().is_zero())
    }
}

impl Index<usize> for SeriesTuple {
    type Output = Series;
    fn index(&self, i: usize) -> &Series {
        &self.components[i]
    }
}

impl<'a> IntoIterator for &'a SeriesTuple {
    type Item = &'a Series;
    type IntoIter = core::slice::Iter<'a, Series>;
    fn into_iter(self) -> Self::IntoIter {
        self.components.iter()
    }
}
