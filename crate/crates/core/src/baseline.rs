//! Reference solvers and the ArcLabeling counterexample.
//!
//! [`quadratic_solve`] tries every anchor pair `(0, w0)`; [`brute_force_oracle`]
//! enumerates all of `S_n`. Both serve as ground truth for the faster solvers.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::digraph::{bfs_tree, is_transitive, verify_conjugator, PermTuple};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::refinement::{extract_witness, indistinguishable, SolveOutcome, SolveStats, Verdict};

/// Largest degree accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_N: usize = 9;

/// Tries `v0 = 0` against every `w0` in ascending order.
///
/// `iterations` counts the anchors tried.
pub fn quadratic_solve(a: &PermTuple, b: &PermTuple) -> Result<SolveOutcome> {
    a.check_same_shape(b)?;
    let start = Instant::now();
    let tree = bfs_tree(a, 0)?;
    let mut stats = SolveStats { setup: start.elapsed(), ..SolveStats::default() };
    for w0 in 0..a.n() {
        let r = indistinguishable(a, b, 0, w0, &tree)?;
        if r.verdict == Verdict::Indistinguishable {
            let mapping = r.mapping.expect("indistinguishable results carry a mapping");
            let tau = extract_witness(&mapping, None, None, a, b)?;
            stats.total = start.elapsed();
            stats.distinguish = stats.total - stats.setup;
            return Ok(SolveOutcome::isomorphic(tau, w0 + 1, stats));
        }
    }
    stats.total = start.elapsed();
    stats.distinguish = stats.total - stats.setup;
    Ok(SolveOutcome::not_isomorphic(None, a.n(), stats))
}

/// Rearranges `p` into the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("a larger element exists right of i");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Enumerates `S_n` in lexicographic order of image arrays and returns the
/// first `tau` with `b_k = tau^-1 a_k tau` for all `k`.
///
/// Does not require transitivity. `iterations` counts the candidates tried.
pub fn brute_force_oracle(a: &PermTuple, b: &PermTuple) -> Result<SolveOutcome> {
    a.check_same_shape(b)?;
    let n = a.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge { n, max: ORACLE_MAX_N });
    }
    let start = Instant::now();
    let mut images: Vec<usize> = (0..n).collect();
    let mut tried = 0;
    loop {
        tried += 1;
        let ok = (0..a.d()).all(|k| {
            let (ak, bk) = (a.perm(k), b.perm(k));
            (0..n).all(|i| images[ak.apply(i)] == bk.apply(images[i]))
        });
        if ok {
            let tau = Permutation::new(images)?;
            debug_assert!(verify_conjugator(a, b, &tau));
            let total = start.elapsed();
            let stats = SolveStats { distinguish: total, total, ..SolveStats::default() };
            return Ok(SolveOutcome::isomorphic(tau, tried, stats));
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    let total = start.elapsed();
    let stats = SolveStats { distinguish: total, total, ..SolveStats::default() };
    Ok(SolveOutcome::not_isomorphic(None, tried, stats))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Each cell ascending; cells ordered by their smallest vertex.
    pub cells: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The same cells with vertices numbered from 1.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
        }
    }
}

/// Orbits of the color-automorphism group of a transitive digraph.
///
/// Every automorphism is determined by the image of vertex 0, so the anchored
/// trials `(0, w0)` find all of them. Cost is `O(d n^2)`.
pub fn orbit_partition(t: &PermTuple) -> Result<OrbitPartition> {
    if !is_transitive(t) {
        return Err(Error::NotTransitive);
    }
    let n = t.n();
    let tree = bfs_tree(t, 0)?;
    let mut sets = DisjointSets::new(n);
    for w0 in 0..n {
        let r = indistinguishable(t, t, 0, w0, &tree)?;
        if let Some(mapping) = r.mapping {
            for (v, &w) in mapping.iter().enumerate() {
                sets.union(v, w);
            }
        }
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut cell_of_root = HashMap::new();
    for v in 0..n {
        let root = sets.find(v);
        let idx = *cell_of_root.entry(root).or_insert_with(|| {
            cells.push(Vec::new());
            cells.len() - 1
        });
        cells[idx].push(v);
    }
    Ok(OrbitPartition { cells })
}

/// Label `<alpha, beta>` of one arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArcLabel {
    pub alpha: u8,
    pub beta: usize,
}

impl ArcLabel {
    pub const REFERENCE: ArcLabel = ArcLabel { alpha: 0, beta: 0 };
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.alpha, self.beta)
    }
}

/// Sridhar's arc labeling for digraphs whose color-0 cycles all have one length.
///
/// Returns `labels[k][i]`, the label of the color-`k` arc leaving `i`. Cycles
/// of `a_0` are taken in order of their smallest vertex and walked from it;
/// `l(v)` is the position of `v` in that listing.
pub fn sridhar_arclabel(t: &PermTuple) -> Result<Vec<Vec<ArcLabel>>> {
    let n = t.n();
    let cycles = t.perm(0).cycles();
    let len = cycles[0].len();
    if cycles.iter().any(|c| c.len() != len) {
        return Err(Error::UnequalCycleLengths { color: 0 });
    }
    let mut l = vec![0; n];
    for (pos, &v) in cycles.iter().flatten().enumerate() {
        l[v] = pos;
    }

    let mut labels = vec![vec![ArcLabel::REFERENCE; n]];
    // first <2,0> arc from C_r to C_s over all colors, as (tail, head)
    let mut first_arc: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for k in 1..t.d() {
        let ak = t.perm(k);
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let head = ak.apply(i);
            let (r, s) = (l[i] / len, l[head] / len);
            let label = if r == s {
                ArcLabel { alpha: 1, beta: (l[head] + len - l[i]) % len }
            } else if let Some(&(j, j_head)) = first_arc.get(&(r, s)) {
                let jump_i = l[head] as isize - l[i] as isize;
                let jump_j = l[j_head] as isize - l[j] as isize;
                ArcLabel { alpha: 2, beta: (jump_i - jump_j).rem_euclid(len as isize) as usize }
            } else {
                first_arc.insert((r, s), (i, head));
                ArcLabel { alpha: 2, beta: 0 }
            };
            row.push(label);
        }
        labels.push(row);
    }
    Ok(labels)
}

/// Number of distinct labels per color, i.e. cells of the initial arc partition.
pub fn label_cell_counts(labels: &[Vec<ArcLabel>]) -> Vec<usize> {
    labels
        .iter()
        .map(|row| {
            let mut distinct = row.clone();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len()
        })
        .collect()
}

/// The 12-point tuple on which ArcLabeling yields a trivial partition.
pub fn counterexample_tuple() -> PermTuple {
    let a1: &[&[usize]] = &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8], &[9, 10, 11]];
    let a2: &[&[usize]] = &[&[0, 10], &[1, 3], &[4, 6], &[7, 9], &[2, 8], &[5, 11]];
    PermTuple::new(vec![
        Permutation::from_cycles(12, a1).expect("valid cycles"),
        Permutation::from_cycles(12, a2).expect("valid cycles"),
    ])
    .expect("same degree")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    #[serde(skip)]
    pub generators: Vec<String>,
    #[serde(skip)]
    pub labels: Vec<Vec<ArcLabel>>,
    /// Distinct arc labels per color.
    pub initial_partition_cells: Vec<usize>,
    /// Automorphism orbits, 1-based.
    pub true_orbits: Vec<Vec<usize>>,
    /// The labeling is trivial while the orbit partition is not.
    pub discrepancy: bool,
}

pub fn demonstrate_counterexample() -> Result<CounterexampleReport> {
    let t = counterexample_tuple();
    let labels = sridhar_arclabel(&t)?;
    let initial_partition_cells = label_cell_counts(&labels);
    let orbits = orbit_partition(&t)?;
    let discrepancy = initial_partition_cells.iter().all(|&c| c == 1) && orbits.cell_count() > 1;
    Ok(CounterexampleReport {
        generators: t.perms().iter().map(Permutation::to_cycle_string).collect(),
        labels,
        initial_partition_cells,
        true_orbits: orbits.one_based(),
        discrepancy,
    })
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.generators.iter().enumerate() {
            writeln!(f, "a{} = {}", k + 1, g)?;
        }
        writeln!(f)?;
        writeln!(f, "ArcLabeling:")?;
        for (k, row) in self.labels.iter().enumerate() {
            let mut distinct = row.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let shown: Vec<String> = distinct.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "  color {}: {} arcs, labels {{{}}}, {} cell(s)",
                k + 1,
                row.len(),
                shown.join(", "),
                self.initial_partition_cells[k]
            )?;
        }
        writeln!(f)?;
        let cells: Vec<String> = self
            .true_orbits
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        writeln!(f, "automorphism orbits ({}): {}", self.true_orbits.len(), cells.join(", "))?;
        let sizes: Vec<usize> = self.true_orbits.iter().map(Vec::len).collect();
        writeln!(f, "orbit sizes: {sizes:?}")?;
        write!(f, "discrepancy: {}", if self.discrepancy { "confirmed" } else { "not found" })
    }
}
