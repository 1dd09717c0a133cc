//! One entry point over every solver.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{brute_force_oracle, quadratic_solve};
use crate::digraph::{is_transitive, PermTuple};
use crate::error::{Error, Result};
use crate::ncycle::solve_ncycle;
use crate::refinement::{color_isomorphic, Backend, SolveOutcome, TreeStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Pick one of the others from the shape of the input.
    Auto,
    Oracle,
    Quadratic,
    /// Refinement over a breadth-first tree, naive word evaluation.
    Plain,
    /// Refinement over a breadth-first tree, reduced word evaluation.
    Subquadratic,
    /// Refinement over a lambda-tree, power-table evaluation.
    Lambda,
    /// Rotation test; needs a color that is an `n`-cycle in both tuples.
    Ncycle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Auto,
        Algorithm::Oracle,
        Algorithm::Quadratic,
        Algorithm::Plain,
        Algorithm::Subquadratic,
        Algorithm::Lambda,
        Algorithm::Ncycle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::Quadratic => "quadratic",
            Algorithm::Plain => "plain",
            Algorithm::Subquadratic => "subquadratic",
            Algorithm::Lambda => "lambda",
            Algorithm::Ncycle => "ncycle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown algorithm {s:?}")))
    }
}

/// Lowest color that is an `n`-cycle in both tuples.
pub fn common_n_cycle(a: &PermTuple, b: &PermTuple) -> Option<usize> {
    (0..a.d().min(b.d())).find(|&k| a.perm(k).is_n_cycle() && b.perm(k).is_n_cycle())
}

/// Default bound on the fewest-cycles count for choosing [`Algorithm::Lambda`].
pub fn default_lambda_threshold(n: usize) -> usize {
    n.isqrt()
}

/// Resolves [`Algorithm::Auto`]: `Ncycle` when a common `n`-cycle color
/// exists, else `Lambda` when the fewest cycles of any color of `a` is at most
/// `lambda_threshold`, else `Subquadratic`. Other choices pass through.
pub fn resolve(alg: Algorithm, a: &PermTuple, b: &PermTuple, lambda_threshold: Option<usize>) -> Algorithm {
    if alg != Algorithm::Auto {
        return alg;
    }
    if common_n_cycle(a, b).is_some() {
        return Algorithm::Ncycle;
    }
    let threshold = lambda_threshold.unwrap_or_else(|| default_lambda_threshold(a.n()));
    if a.min_cycle_count().1 <= threshold {
        Algorithm::Lambda
    } else {
        Algorithm::Subquadratic
    }
}

/// Checks that `alg` applies to the pair: same shape, and both tuples
/// transitive unless `alg` is the oracle.
pub fn check_input(alg: Algorithm, a: &PermTuple, b: &PermTuple) -> Result<()> {
    a.check_same_shape(b)?;
    if alg != Algorithm::Oracle && !(is_transitive(a) && is_transitive(b)) {
        return Err(Error::NotTransitive);
    }
    if alg == Algorithm::Ncycle && common_n_cycle(a, b).is_none() {
        return Err(Error::NotAnNCycle { color: 0 });
    }
    Ok(())
}

/// Runs a resolved algorithm without the input checks of [`check_input`].
pub fn run(alg: Algorithm, a: &PermTuple, b: &PermTuple) -> Result<SolveOutcome> {
    match alg {
        Algorithm::Auto => run(resolve(alg, a, b, None), a, b),
        Algorithm::Oracle => brute_force_oracle(a, b),
        Algorithm::Quadratic => quadratic_solve(a, b),
        Algorithm::Plain => color_isomorphic(a, b, TreeStrategy::Plain, Backend::Naive),
        Algorithm::Subquadratic => color_isomorphic(a, b, TreeStrategy::Plain, Backend::Reduced),
        Algorithm::Lambda => color_isomorphic(a, b, TreeStrategy::Lambda, Backend::PowerTable),
        Algorithm::Ncycle => {
            let j = common_n_cycle(a, b).ok_or(Error::NotAnNCycle { color: 0 })?;
            solve_ncycle(a, b, j)
        }
    }
}

/// Resolves, checks and runs.
pub fn solve(alg: Algorithm, a: &PermTuple, b: &PermTuple) -> Result<SolveOutcome> {
    let alg = resolve(alg, a, b, None);
    check_input(alg, a, b)?;
    run(alg, a, b)
}
