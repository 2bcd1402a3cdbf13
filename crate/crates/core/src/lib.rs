//! Exact-arithmetic toolkit for the modular data of finite group doubles and
//! of Heisenberg-type packets over small finite fields.
//!
//! Everything is computed over cyclotomic fields with rational coefficients;
//! no floating point enters any verified identity. Floating point appears only
//! in the optional numeric embedding used for reports.

pub mod cyclotomic;
pub mod finite_field;
pub mod group;
pub mod chartab;
pub mod class_functions;
pub mod double;
pub mod metric;
pub mod heisenberg;

pub use cyclotomic::Cyclotomic;

/// Default cap on group orders for table-based constructions.
pub const DEFAULT_SIZE_BOUND: usize = 5000;

/// Crate-wide error type.
///
/// `kind` partitions errors into the categories the CLI maps to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero in cyclotomic arithmetic")]
    DivisionByZero,
    #[error("square root of {0} is not representable here")]
    SqrtNotRepresentable(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("root search exceeded extension degree bound {bound}")]
    DegreeBound { bound: usize },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("size bound {bound} exceeded ({actual} elements)")]
    SizeBound { bound: usize, actual: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("character is not stable under the twisting automorphism")]
    NotStable,
    #[error("label is not fixed by the automorphism action")]
    NotFixed,
    #[error("mismatched spaces: {0}")]
    SpaceMismatch(String),
    #[error("metric group axiom failed: {0}")]
    MetricAxiom(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("verification check failed: {0}")]
    CheckFailed(String),
}

/// Coarse error category, used by the CLI for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    SizeBound,
    CheckFailed,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            DivisionByZero | SqrtNotRepresentable(_) | NotPrime(_) | InvalidGroup(_)
            | NotSubgroup(_) | NotStable | NotFixed | SpaceMismatch(_) => ErrorKind::InvalidInput,
            SizeBound { .. } | DegreeBound { .. } => ErrorKind::SizeBound,
            MetricAxiom(_) | CheckFailed(_) => ErrorKind::CheckFailed,
            Internal(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
