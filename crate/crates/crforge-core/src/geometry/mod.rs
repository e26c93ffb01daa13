//! Formal generic submanifolds: normal coordinates, the manifold ideal,
//! CR vector fields, Segre mappings, finite type and essential finiteness.

mod essential;
mod field;
mod manifold;
mod segre;

pub use essential::{
    essential_finiteness_nf, essential_finiteness_test, essential_generators, essential_generators_defining,
    EssFinReport,
};
pub use field::{cr_basis, cr_basis_defining, invert_series_matrix, tangential_frame, tangential_frame_nf, FormalVectorField};
pub use manifold::{normalize, DefiningData, GeneratorForm, GenericSubmanifoldNF, Layout, Normalization};
pub use segre::{finite_type_test, segre_chain, segre_map, verify_segre_identity, FiniteType, RankPoint, RungRank, SymbolicMinor, TypeReport};

use alloc::format;
use alloc::string::String;

use crate::series::Series;

/// First stored term of a series, for diagnostics.
pub(crate) fn describe_first_term(s: &Series) -> String {
    match s.terms().iter().next() {
        Some((m, c)) => format!("coefficient of {:?} is {}", m.0, c),
        None => String::from("no nonzero coefficient"),
    }
}
