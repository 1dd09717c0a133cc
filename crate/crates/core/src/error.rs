use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {left} points vs {right} points")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("exponent {exponent} out of range for degree {n}")]
    ExponentOutOfRange { exponent: usize, n: usize },

    #[error("tuple shape mismatch: (n={n_a}, d={d_a}) vs (n={n_b}, d={d_b})")]
    ShapeMismatch {
        n_a: usize,
        d_a: usize,
        n_b: usize,
        d_b: usize,
    },

    #[error("empty tuple: at least one permutation is required")]
    EmptyTuple,

    #[error("color {color} out of range for a tuple of {d} permutations")]
    InvalidColor { color: usize, d: usize },

    #[error("vertex {vertex} out of range for {n} points")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("the tuple does not generate a transitive group")]
    NotTransitive,

    #[error("permutation of color {color} is not an n-cycle")]
    NotAnNCycle { color: usize },

    #[error("cycles of color {color} have unequal lengths")]
    UnequalCycleLengths { color: usize },

    #[error("input too large: n = {n} exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("strings have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}
