//! File formats, reports and the command-line surface for `crforge-core`.

pub mod commands;
pub mod fixtures;
pub mod format;
pub mod json;
pub mod report;

pub use commands::{run_command, Config, Input, Outcome};

use std::fmt;

/// Exit 0: computed. 1: verdict negative. 2: inconclusive at the bounds. 3: input error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

/// An error carrying the exit code it maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<crforge_core::Error> for Failure {
    fn from(e: crforge_core::Error) -> Self {
        use crforge_core::Error as E;
        let code = match e {
            E::BoundExhausted(_) | E::Hypothesis(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}
