use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg} (near `{token}`)")]
    Syntax {
        pos: usize,
        token: String,
        msg: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("strand index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("subset {0} is not strictly increasing")]
    UnsortedSubset(String),

    #[error("mismatched word parameters: (n={n1}, k={k1}) vs (n={n2}, k={k2})")]
    Mismatch {
        n1: usize,
        k1: usize,
        n2: usize,
        k2: usize,
    },

    #[error("color {color} is outside the carrier 0..{m}")]
    OutOfCarrier { color: usize, m: usize },

    #[error("tuple has length {got}, expected {expected}")]
    TupleLength { got: usize, expected: usize },

    #[error("orbit table is not equivariant at {0}")]
    NotEquivariant(String),

    #[error("orbit table is missing representative {0}")]
    MissingRepresentative(String),

    #[error("map fails k-biquandle axiom {axiom}: {detail}")]
    AxiomFailure { axiom: String, detail: String },

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("multiplicity vector {0} is not in M_k")]
    InvalidMultiplicity(String),

    #[error("flat biquandle fails identity {0}")]
    FlatIdentity(String),

    #[error("search budget of {0} partial assignments exceeded")]
    BudgetExceeded(u64),

    #[error("malformed biquandle file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
