//! Deciding color-isomorphism of two permutation digraphs by anchored
//! tree-growing and halving refinement of candidate cells.
//!
//! [`indistinguishable`] grows a copy of a spanning tree of `G_a` inside `G_b`
//! from a pair of anchors. Either the copy extends to an isomorphism, or the
//! first conflict yields a word whose walk is closed at the `b` anchor and open
//! at the `a` anchor. [`color_isomorphic`] uses such words to split the current
//! candidate cells by fixed points of the word's product, keeps the smaller
//! side, and repeats: at most `floor(log2 n) + 1` rounds.

use std::time::{Duration, Instant};

use crate::digraph::{lambda_tree, BfsGrower, verify_conjugator, Letter, PermTuple, SpanningTree, Word};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::word_eval::{Evaluator, LambdaBase};

const UNMAPPED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Indistinguishable,
    Distinguishable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishResult {
    pub verdict: Verdict,
    /// Empty when indistinguishable; otherwise closed at the `b` anchor and
    /// open at the `a` anchor.
    pub word: Word,
    /// `mapping[v]` is the image in `G_b` of vertex `v` of `G_a`; present
    /// only when indistinguishable.
    pub mapping: Option<Vec<usize>>,
}

/// Tests whether some color-isomorphism `G_a -> G_b` sends `v0` to `w0`.
///
/// `tree` must be a spanning tree of `G_a` rooted at `v0`.
pub fn indistinguishable(
    a: &PermTuple,
    b: &PermTuple,
    v0: usize,
    w0: usize,
    tree: &SpanningTree,
) -> Result<DistinguishResult> {
    a.check_same_shape(b)?;
    let n = a.n();
    if v0 >= n {
        return Err(Error::InvalidVertex { vertex: v0, n });
    }
    if w0 >= n {
        return Err(Error::InvalidVertex { vertex: w0, n });
    }
    if tree.n() != n || tree.root() != v0 {
        return Err(Error::Contract(format!("spanning tree must span {n} vertices and be rooted at {v0}")));
    }

    anchored_match(a, b, v0, w0, TreeSource::Built(tree))
}

/// Like [`indistinguishable`] over `bfs_tree(a, v0)`, but the tree is grown
/// only as far as the matching gets, so an early conflict costs little.
/// The verdict and word are the same as with the prebuilt tree.
pub fn indistinguishable_bfs(a: &PermTuple, b: &PermTuple, v0: usize, w0: usize) -> Result<DistinguishResult> {
    a.check_same_shape(b)?;
    let n = a.n();
    if w0 >= n {
        return Err(Error::InvalidVertex { vertex: w0, n });
    }
    anchored_match(a, b, v0, w0, TreeSource::Grown(BfsGrower::new(a, v0)?))
}

enum TreeSource<'a> {
    Built(&'a SpanningTree),
    Grown(BfsGrower<'a>),
}

impl TreeSource<'_> {
    fn vertex(&mut self, idx: usize) -> Option<usize> {
        match self {
            TreeSource::Built(t) => t.order().get(idx).copied(),
            TreeSource::Grown(g) => g.vertex(idx),
        }
    }

    fn tree(&self) -> &SpanningTree {
        match self {
            TreeSource::Built(t) => t,
            TreeSource::Grown(g) => g.tree(),
        }
    }
}

// Paths in the copy T_b spell the same words as the matching paths in T_a,
// so T_b is never built explicitly.
fn closed_walk(tree: &SpanningTree, ini_a: usize, color: usize, ter_a: usize) -> Word {
    let v0 = tree.root();
    let mut word = tree.path_word(v0, ini_a);
    word.push(Letter::plus(color));
    word.extend_from(&tree.path_word(ter_a, v0));
    word
}

fn anchored_match(
    a: &PermTuple,
    b: &PermTuple,
    v0: usize,
    w0: usize,
    mut source: TreeSource<'_>,
) -> Result<DistinguishResult> {
    let n = a.n();
    // image[v]: vertex of G_b matched with v; preimage[w]: the reverse
    let mut image = vec![UNMAPPED; n];
    let mut preimage = vec![UNMAPPED; n];
    image[v0] = w0;
    preimage[w0] = v0;

    let mut idx = 1;
    while let Some(v) = source.vertex(idx) {
        idx += 1;
        let tree = source.tree();
        let arc = tree.parent_arc(v).expect("non-root vertices have a parent");
        let u = arc.parent;
        let wu = image[u];
        let v_img = if arc.forward { b.perm(arc.color).apply(wu) } else { b.inverse(arc.color).apply(wu) };
        let owner = preimage[v_img];
        if owner == UNMAPPED {
            image[v] = v_img;
            preimage[v_img] = v;
            continue;
        }
        // v_img is already in T_b: the arc f of G_b closes a cycle there
        let word = if arc.forward {
            // f = (image[u], b_k), ini(f) = image[u], ter(f) = v_img
            closed_walk(tree, u, arc.color, owner)
        } else {
            // f = (v_img, b_k), ini(f) = v_img, ter(f) = image[u]
            closed_walk(tree, owner, arc.color, u)
        };
        return Ok(DistinguishResult { verdict: Verdict::Distinguishable, word, mapping: None });
    }
    if idx != n {
        return Err(Error::NotTransitive);
    }
    let tree = source.tree();

    // Every arc of G_a must now land on the matching arc of G_b. Tree arcs
    // agree by construction, so scanning all arcs checks exactly the cotree ones.
    for color in 0..a.d() {
        let ak = a.perm(color);
        let bk = b.perm(color);
        for i in 0..n {
            let v_img = bk.apply(image[i]);
            if v_img != image[ak.apply(i)] {
                let word = closed_walk(tree, i, color, preimage[v_img]);
                return Ok(DistinguishResult { verdict: Verdict::Distinguishable, word, mapping: None });
            }
        }
    }

    Ok(DistinguishResult { verdict: Verdict::Indistinguishable, word: Word::default(), mapping: Some(image) })
}

/// Splits `cell` into the fixed points (closed walks) and the moved points
/// (open walks) of the product named by `word`.
pub fn partition_cells(
    t: &PermTuple,
    cell: &[usize],
    word: &Word,
    evaluator: &Evaluator<'_>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    word.check_colors(t.d())?;
    let images = evaluator.images(t, word, cell)?;
    let mut closed = Vec::new();
    let mut open = Vec::new();
    for (&v, &img) in cell.iter().zip(&images) {
        if v == img {
            closed.push(v);
        } else {
            open.push(v);
        }
    }
    Ok((closed, open))
}

/// Reads a verified color-isomorphism as a conjugator on the original points.
///
/// `mapping` sends vertices of the (possibly relabeled) `a` digraph to
/// vertices of the (possibly relabeled) `b` digraph, where `relabel_x[v]` is
/// the internal label of original vertex `v`. The result `tau` satisfies
/// `b_k = tau^-1 a_k tau` on the original tuples.
pub fn extract_witness(
    mapping: &[usize],
    relabel_a: Option<&Permutation>,
    relabel_b: Option<&Permutation>,
    a: &PermTuple,
    b: &PermTuple,
) -> Result<Permutation> {
    let n = a.n();
    if mapping.len() != n {
        return Err(Error::SizeMismatch { left: n, right: mapping.len() });
    }
    let b_back = relabel_b.map(Permutation::inverse);
    let images: Vec<usize> = (0..n)
        .map(|v| {
            let internal = relabel_a.map_or(v, |r| r.apply(v));
            let target = mapping[internal];
            b_back.as_ref().map_or(target, |r| r.apply(target))
        })
        .collect();
    let tau = Permutation::new(images).map_err(|e| Error::Internal(format!("mapping is not a bijection: {e}")))?;
    if !verify_conjugator(a, b, &tau) {
        return Err(Error::Internal("mapping does not conjugate the tuples".into()));
    }
    Ok(tau)
}

/// Which spanning tree seeds each call of [`indistinguishable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStrategy {
    /// Breadth-first tree over all colors.
    Plain,
    /// Cycles of the color with fewest cycles, joined by `lambda - 1` other arcs.
    Lambda,
}

/// How cells are split by a distinguishing word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Naive,
    Reduced,
    PowerTable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub setup: Duration,
    pub distinguish: Duration,
    pub partition: Duration,
    pub total: Duration,
}

/// Result of any solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub isomorphic: bool,
    /// `tau` with `b_k = tau^-1 a_k tau`, present iff `isomorphic`.
    pub witness: Option<Permutation>,
    /// The last distinguishing word when refinement proves non-isomorphism.
    pub certificate: Option<Word>,
    pub iterations: usize,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub(crate) fn isomorphic(witness: Permutation, iterations: usize, stats: SolveStats) -> Self {
        Self { isomorphic: true, witness: Some(witness), certificate: None, iterations, stats }
    }

    pub(crate) fn not_isomorphic(certificate: Option<Word>, iterations: usize, stats: SolveStats) -> Self {
        Self { isomorphic: false, witness: None, certificate, iterations, stats }
    }
}

/// Decides whether `G_a` and `G_b` are color-isomorphic by halving refinement.
///
/// `a` must be transitive. If `b` is not, the answer is `false`.
pub fn color_isomorphic(
    a: &PermTuple,
    b: &PermTuple,
    strategy: TreeStrategy,
    backend: Backend,
) -> Result<SolveOutcome> {
    a.check_same_shape(b)?;
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let n = a.n();
    let (j, lambda) = match (strategy, backend) {
        (TreeStrategy::Plain, Backend::Naive | Backend::Reduced) => (0, n),
        _ => a.min_cycle_count(),
    };

    let bases = match backend {
        Backend::PowerTable => Some((LambdaBase::new(a, j)?, LambdaBase::new(b, j)?)),
        _ => None,
    };
    let max_separators = match strategy {
        // two tree paths with at most lambda - 1 joining arcs each, plus the closing arc
        TreeStrategy::Lambda => 2 * lambda - 1,
        TreeStrategy::Plain => usize::MAX,
    };
    let (eval_a, eval_b) = match (&bases, backend) {
        (Some((base_a, base_b)), _) => (
            Evaluator::PowerTable { base: base_a, max_separators },
            Evaluator::PowerTable { base: base_b, max_separators },
        ),
        (None, Backend::Reduced) => (Evaluator::Reduced, Evaluator::Reduced),
        _ => (Evaluator::Naive, Evaluator::Naive),
    };
    stats.setup = start.elapsed();

    let mut cell_a: Vec<usize> = (0..n).collect();
    let mut cell_b: Vec<usize> = (0..n).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        // cells stay sorted, so the first entry is the lowest index
        let (v, w) = (cell_a[0], cell_b[0]);

        let t0 = Instant::now();
        let result = match strategy {
            TreeStrategy::Plain => indistinguishable_bfs(a, b, v, w)?,
            TreeStrategy::Lambda => indistinguishable(a, b, v, w, &lambda_tree(a, j, v)?)?,
        };
        stats.distinguish += t0.elapsed();

        if result.verdict == Verdict::Indistinguishable {
            let mapping = result.mapping.expect("indistinguishable results carry a mapping");
            let tau = extract_witness(&mapping, None, None, a, b)?;
            stats.total = start.elapsed();
            return Ok(SolveOutcome::isomorphic(tau, iterations, stats));
        }

        let word = result.word;
        let t1 = Instant::now();
        let (closed_a, open_a) = partition_cells(a, &cell_a, &word, &eval_a)?;
        let (closed_b, open_b) = partition_cells(b, &cell_b, &word, &eval_b)?;
        stats.partition += t1.elapsed();

        let (next_a, next_b) =
            if closed_a.len() <= open_a.len() { (closed_a, closed_b) } else { (open_a, open_b) };
        if next_a.len() != next_b.len() {
            stats.total = start.elapsed();
            return Ok(SolveOutcome::not_isomorphic(Some(word), iterations, stats));
        }
        debug_assert!(!next_a.is_empty());
        debug_assert!(iterations <= n.ilog2() as usize + 1);
        cell_a = next_a;
        cell_b = next_b;
    }
}
