//! Solvers for the transitive simultaneous conjugacy problem in `S_n`.
//!
//! Given tuples `a = (a_0, .., a_{d-1})` and `b = (b_0, .., b_{d-1})` that each
//! generate a transitive group, decide whether one `tau` satisfies
//! `b_k = tau^-1 a_k tau` for every `k`, and produce it when it exists.
//! Permutations multiply left to right (see [`perm`]).

pub mod baseline;
pub mod digraph;
pub mod error;
pub mod instances;
pub mod ncycle;
pub mod perm;
pub mod refinement;
pub mod solve;
pub mod word_eval;

pub use digraph::{Letter, PermTuple, Sign, SpanningTree, Word};
pub use error::{Error, Result};
pub use perm::{CycleType, Permutation, PowerTable};
pub use refinement::{Backend, SolveOutcome, SolveStats, TreeStrategy};
pub use instances::{InstanceKind, InstanceSpec};
pub use solve::Algorithm;
