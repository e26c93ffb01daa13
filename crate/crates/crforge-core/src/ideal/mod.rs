//! Ideal computations by bounded-degree linear algebra, monomial staircases
//! and resultant elimination.

mod curve;
mod membership;
mod monicize;
mod resultant;
mod staircase;

pub use curve::{find_monomial_curve, verify_curve, CurveWitness};
pub use membership::{membership_bounded, MemberWitness, Membership};
pub use monicize::{monicize_system, MonicRelation};
pub use resultant::{berkowitz_det, eliminate_pair, reduce_mod_monic, resultant_x, Elimination};
pub use staircase::{staircase_codim, StaircaseReport, StaircaseStatus};

use crate::error::{Error, Result};
use crate::tuple::SeriesTuple;

/// An ideal given by generators in a formal power series ring.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesIdeal {
    generators: SeriesTuple,
}

impl SeriesIdeal {
    pub fn new(generators: SeriesTuple) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Shape("ideal needs at least one generator".into()));
        }
        Ok(SeriesIdeal { generators })
    }

    pub fn generators(&self) -> &SeriesTuple {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators.nvars()
    }

    pub fn prec(&self) -> u32 {
        self.generators.prec()
    }
}
