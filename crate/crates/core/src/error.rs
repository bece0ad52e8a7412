use thiserror::Error;

use crate::semigroup::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}: entries must be a bijection on 0..{len}", len = .0.len())]
    InvalidPermutation(Vec<usize>),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("tensor is not antisymmetric at {0:?}")]
    Antisymmetry(Vec<usize>),

    #[error("index {index} out of range (size {size})")]
    Index { index: usize, size: usize },

    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("odd bracket order {0} is only supported for order 2")]
    OddOrderUnsupported(usize),

    #[error("semigroup axioms violated ({} violation(s), first: {})", .0.len(), .0[0])]
    InvalidSemigroup(Vec<AxiomViolation>),

    #[error("semigroup has no zero element")]
    NoZeroElement,

    #[error("split is not reducible: C{lower:?}^{upper} = {value} crosses back into v0")]
    NotReducible { lower: Vec<usize>, upper: usize, value: String },

    #[error("generators are linearly dependent (rank {rank} < {count})")]
    Rank { rank: usize, count: usize },

    #[error("multibracket of {0:?} lies outside the generator span")]
    Closure(Vec<usize>),

    #[error("decomposition is not resonant: {0}")]
    NotResonant(String),

    #[error("invalid decomposition: {0}")]
    Decomposition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
