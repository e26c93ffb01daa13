//! Exact truncated formal power series over the Gaussian rationals, and the
//! constructions on formal generic submanifolds built from them: normal
//! coordinates, Segre mappings, finite type and essential finiteness tests,
//! reflection identities and jet determination ladders.
//!
//! Every identity is checked "through order D": coefficients of total degree
//! at most `D` agree exactly. Nothing here uses floating point.

#![no_std]

extern crate alloc;

pub mod coeff;
pub mod error;
pub mod geometry;
pub mod ideal;
pub mod implicit;
pub mod linalg;
pub mod mapping;
pub mod multi;
pub mod poly;
pub mod rank;
pub mod reflection;
pub mod series;
pub mod tuple;
pub mod weierstrass;

pub use coeff::{ComplexRational, C};
pub use error::{Error, Result};
pub use implicit::implicit_solve;
pub use multi::MultiIndex;
pub use poly::PolyInX;
pub use rank::{generic_rank, RankMode, RankReport};
pub use series::{Series, TruncatedSeries};
pub use tuple::SeriesTuple;
pub use weierstrass::weierstrass_prepare;
