use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group order {0}")]
    InvalidOrder(usize),

    #[error("group axiom violated: {0}")]
    Axiom(AxiomViolation),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("index out of range: {what} {index} (bound {bound})")]
    Range {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),

    #[error("cannot construct: {0}")]
    Construction(String),

    #[error("scale guard exceeded: {what} needs about {estimate} (limit {limit})")]
    ScaleGuard {
        what: String,
        estimate: u128,
        limit: u128,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// The first group axiom found to fail on a multiplication table, with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    NotSquare { row: usize, len: usize, order: usize },
    EntryOutOfRange { row: usize, col: usize, value: usize },
    NoIdentity,
    NoInverse { element: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::NotSquare { row, len, order } => {
                write!(f, "row {row} has length {len}, expected {order}")
            }
            AxiomViolation::EntryOutOfRange { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} is not an element")
            }
            AxiomViolation::NoIdentity => write!(f, "no identity element"),
            AxiomViolation::NoInverse { element } => {
                write!(f, "no inverse for element {element}")
            }
            AxiomViolation::NotAssociative { a, b, c } => {
                write!(f, "(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
