use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("rank {g} exceeds the enumeration bound {bound}")]
    BoundExceeded { g: usize, bound: usize },

    #[error("w = {w:?} is not a minimal coset representative ({which})")]
    NotMinimalRepresentative { w: Vec<usize>, which: &'static str },

    #[error("pair (w = {w:?}, J = {j:?}) is not admissible")]
    NotAdmissible { w: Vec<usize>, j: Vec<usize> },

    #[error("invalid block permutation: {0}")]
    InvalidSigma(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    NotBt1(String),

    #[error("invalid field: {0}")]
    Field(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("positivity failed for w = {w:?}, J = {j:?}, p = {p}: value {value} at v = {v:?}")]
    InequalityViolated {
        w: Vec<usize>,
        j: Vec<usize>,
        p: u64,
        v: Vec<usize>,
        value: i128,
    },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
