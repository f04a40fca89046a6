use thiserror::Error;

use crate::rootcomb::Root;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parabolic type: {0}")]
    InvalidType(String),

    #[error("root {0} is not in the nilradical")]
    NotInNilradical(Root),

    #[error("invalid root ({0}, {1}) for n = {2}")]
    InvalidRoot(usize, usize, usize),

    #[error("ragged minor: {rows} rows vs {cols} columns")]
    RaggedMinor { rows: usize, cols: usize },

    #[error("minor index set must be strictly ascending and in range")]
    BadIndexSet,

    #[error("pair ({0}, {1}) is not admissible")]
    NotAdmissible(Root, Root),

    #[error("point lies outside U0: base minor at {0} vanishes")]
    OutsideU0(Root),

    #[error("unsupported type {0}: needs non-increasing block sizes or at most three blocks")]
    UnsupportedType(String),

    #[error("group element is not upper unitriangular")]
    NotUnitriangular,

    #[error("matrix has an entry at ({0}, {1}) outside the nilradical")]
    SupportViolation(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("one-parameter subgroup index k = {k} out of range for n = {n}")]
    SubgroupOutOfRange { k: usize, n: usize },

    #[error("unknown output format: {0}")]
    UnknownFormat(String),

    #[error("missing invariant value for {0}")]
    MissingValue(String),

    #[error("restriction of {0} is not a single monomial in a fresh variable")]
    NotMonomial(String),

    #[error("reduction did not reach the slice: {0}")]
    ReductionFailed(String),

    #[error("division is not exact")]
    InexactDivision,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
