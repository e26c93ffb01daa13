use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    VarCountMismatch { left: usize, right: usize },
    ArityMismatch { expected: usize, got: usize },
    NonzeroConstant { component: usize },
    ZeroConstant,
    UndetectableOrder,
    SingularJacobian,
    NotMonic,
    Shape(String),
    Genericity(String),
    Normality(String),
    Reality(String),
    Dimension(String),
    BoundExhausted(String),
    Precondition(String),
    Hypothesis(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VarCountMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} components, got {got}")
            }
            Error::NonzeroConstant { component } => {
                write!(f, "substituted component {component} has a nonzero constant term")
            }
            Error::ZeroConstant => f.write_str("series has zero constant term"),
            Error::UndetectableOrder => {
                f.write_str("series vanishes in the distinguished variable through precision")
            }
            Error::SingularJacobian => f.write_str("Jacobian is singular at the origin"),
            Error::NotMonic => f.write_str("polynomial is not monic"),
            Error::Shape(s) => write!(f, "shape violation: {s}"),
            Error::Genericity(s) => write!(f, "genericity failure: {s}"),
            Error::Normality(s) => write!(f, "normality failure: {s}"),
            Error::Reality(s) => write!(f, "reality failure: {s}"),
            Error::Dimension(s) => write!(f, "dimension mismatch: {s}"),
            Error::BoundExhausted(s) => write!(f, "bound exhausted: {s}"),
            Error::Precondition(s) => write!(f, "precondition failed: {s}"),
            Error::Hypothesis(s) => write!(f, "hypothesis failure: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
