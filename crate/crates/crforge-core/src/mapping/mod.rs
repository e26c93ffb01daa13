//! Formal maps between generic submanifolds in normal coordinates.

mod dichotomy;
mod map;
mod segre_hom;

pub use dichotomy::{hypersurface_dichotomy, Dichotomy};
pub use map::{check_sends, FormalMapNF, MapCheckReport};
pub use segre_hom::{
    find_relation, finite_map_test, kernel_vector_field, segre_injectivity_test, total_degeneracy_test,
    DegeneracyReport, FiniteMapReport, Injectivity, SegreHomReport,
};
