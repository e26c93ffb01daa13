mod expand;
mod identity;
mod ladder;
mod leibniz;
mod separation;
mod system;

pub use expand::{expand_reflection, pick_r, PickedOrder, ReflectionExpansion};
pub use system::{build_reflection_system, ReflectionSystem};
pub use identity::{ambient_polynomial, reflection_identities, verify_reflection, ReflectionIdentity, ReflectionOptions};
pub use leibniz::{derived_polynomial, leibniz_coefficients, DerivedPolynomial, FieldPowers, LeibnizContext, LeibnizTerms};
pub use separation::{roots_separated, separation_order, Separation};
pub use ladder::{
    chain_agreement, convergence_ledger, Conclusion, ConvergenceLedger, DeterminationReport, LedgerEntry, Rung, RungVerdict,
    RIGHT_INVERSE_NOTE,
};
