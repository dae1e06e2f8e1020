use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{a} is not a unit modulo {n}")]
    NonUnit { a: u64, n: u64 },

    #[error("{m} does not divide {n}")]
    NotDivisor { m: u64, n: u64 },

    #[error("residue {value} out of range for modulus {n}")]
    OutOfRange { value: u64, n: u64 },

    #[error("bad modulus: {0}")]
    BadModulus(String),

    #[error("color classes do not partition Z_n: {0}")]
    BadPartition(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("coloring is over Z_{coloring} but the equation is over Z_{equation}")]
    ModulusMismatch { coloring: u64, equation: u64 },

    #[error("palette of class {class} has {extra} colors outside the reference palette")]
    NotProjectable { class: u64, extra: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("not covered by a closed form: {0}")]
    NotCovered(String),

    #[error("modulus {n} exceeds the search cap {cap}")]
    CapExceeded { n: u64, cap: u64 },

    #[error("bad witness: {0}")]
    BadWitness(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
