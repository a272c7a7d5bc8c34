use thiserror::Error;

use crate::signs::Convention;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("{markings} markings are not a permutation: {detail}")]
    NotPermutation { markings: &'static str, detail: String },

    #[error("X and O markings share the cell in row {row}, column {col}")]
    MarkingCollision { row: usize, col: usize },

    #[error("grid size {n} exceeds the bound {bound} for this operation")]
    BoundExceeded { n: usize, bound: usize },

    #[error("rectangles do not compose: intermediate states differ")]
    StateMismatch,

    #[error("anomalous index-two class at state {state}: {detail}")]
    AnomalousClass { state: String, detail: String },

    #[error("sign constraint system is inconsistent")]
    Inconsistent,

    #[error("sign assignment is missing rectangle {0}")]
    MissingRectangle(String),

    #[error("rectangle {0} appears more than once")]
    DuplicateRectangle(String),

    #[error("{0} is not an empty rectangle")]
    UnknownRectangle(String),

    #[error("size mismatch: expected n = {expected}, found n = {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("sign assignments are not gauge equivalent (cycle inconsistency at {0})")]
    NotGaugeEquivalent(String),

    #[error("rectangle graph is disconnected: {reached} of {total} states reachable")]
    DisconnectedStates { reached: usize, total: usize },

    #[error("expected a {expected} sign assignment, found {found}")]
    ConventionMismatch {
        expected: Convention,
        found: Convention,
    },

    #[error("homology requires a tilde complex")]
    NotTilde,

    #[error("sign assignment violates {violations} {convention} constraints")]
    AxiomsViolated {
        convention: Convention,
        violations: usize,
    },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),
}
