//! Permutation digraphs, words over signed colors, and spanning trees.
//!
//! The digraph of a tuple `(a_0, .., a_{d-1})` has the points as vertices and
//! one arc `i -> i^(a_k)` of color `k` per point and color. Arcs are never
//! stored: they are read off the image arrays on demand.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An ordered tuple of permutations on the same points, with inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTuple {
    n: usize,
    d: usize,
    // perms followed by their inverses, so a signed letter indexes directly
    gens: Vec<Permutation>,
}

impl PermTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        let first = perms.first().ok_or(Error::EmptyTuple)?;
        let n = first.degree();
        if let Some(p) = perms.iter().find(|p| p.degree() != n) {
            return Err(Error::SizeMismatch { left: n, right: p.degree() });
        }
        let d = perms.len();
        let mut gens = perms;
        gens.reserve(d);
        for k in 0..d {
            let inv = gens[k].inverse();
            gens.push(inv);
        }
        Ok(Self { n, d, gens })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.gens[..self.d]
    }

    pub fn inverses(&self) -> &[Permutation] {
        &self.gens[self.d..]
    }

    pub fn perm(&self, color: usize) -> &Permutation {
        &self.gens[color]
    }

    pub fn inverse(&self, color: usize) -> &Permutation {
        &self.gens[self.d + color]
    }

    /// Generators followed by inverses; letter `k^+1` is index `k`,
    /// `k^-1` is index `d + k`.
    pub fn signed_generators(&self) -> &[Permutation] {
        &self.gens
    }

    #[inline]
    pub fn letter_index(&self, letter: Letter) -> usize {
        match letter.sign {
            Sign::Plus => letter.color,
            Sign::Minus => self.d + letter.color,
        }
    }

    #[inline]
    pub fn step(&self, letter: Letter, v: usize) -> usize {
        self.gens[self.letter_index(letter)].apply(v)
    }

    pub fn into_perms(mut self) -> Vec<Permutation> {
        self.gens.truncate(self.d);
        self.gens
    }

    /// Both tuples have the same `n` and `d`.
    pub fn check_same_shape(&self, other: &PermTuple) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::ShapeMismatch { n_a: self.n, d_a: self.d, n_b: other.n, d_b: other.d });
        }
        Ok(())
    }

    pub fn check_color(&self, color: usize) -> Result<()> {
        if color >= self.d {
            return Err(Error::InvalidColor { color, d: self.d });
        }
        Ok(())
    }

    /// Conjugates every generator: `tau^-1 a_k tau`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<PermTuple> {
        let perms = self
            .perms()
            .iter()
            .map(|p| p.conjugate_by(tau))
            .collect::<Result<Vec<_>>>()?;
        PermTuple::new(perms)
    }

    /// `min_k` of the number of cycles of `a_k`, with the lowest color
    /// attaining it.
    pub fn min_cycle_count(&self) -> (usize, usize) {
        self.perms()
            .iter()
            .enumerate()
            .map(|(k, p)| (p.cycle_count(), k))
            .min()
            .map(|(lambda, k)| (k, lambda))
            .expect("tuples are nonempty")
    }
}

/// Whether `tau` simultaneously conjugates `a` onto `b`: `b_k = tau^-1 a_k tau` for all `k`.
pub fn verify_conjugator(a: &PermTuple, b: &PermTuple, tau: &Permutation) -> bool {
    if a.check_same_shape(b).is_err() || tau.degree() != a.n() {
        return false;
    }
    a.perms().iter().zip(b.perms()).all(|(ak, bk)| {
        (0..a.n()).all(|i| tau.apply(ak.apply(i)) == bk.apply(tau.apply(i)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A signed color `k^(+1)` or `k^(-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub color: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn plus(color: usize) -> Self {
        Self { color, sign: Sign::Plus }
    }

    pub fn minus(color: usize) -> Self {
        Self { color, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Self {
        Self { color: self.color, sign: self.sign.flip() }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}+", self.color),
            Sign::Minus => write!(f, "{}-", self.color),
        }
    }
}

/// A finite sequence of signed colors. The empty word is `Word::default()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// The word of the reversed walk.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn check_colors(&self, d: usize) -> Result<()> {
        match self.letters.iter().find(|l| l.color >= d) {
            Some(l) => Err(Error::InvalidColor { color: l.color, d }),
            None => Ok(()),
        }
    }

    /// The permutation `a_word`, built by composing generators left to right.
    pub fn product(&self, t: &PermTuple) -> Permutation {
        let images = (0..t.n()).map(|v| walk_eval(t, self, v)).collect();
        Permutation::from_images_unchecked(images)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Terminal vertex of the walk spelled by `word` from `start`.
pub fn walk_eval(t: &PermTuple, word: &Word, start: usize) -> usize {
    word.letters.iter().fold(start, |v, &l| t.step(l, v))
}

/// Whether the digraph is connected (equivalently, the tuple is transitive).
pub fn is_transitive(t: &PermTuple) -> bool {
    let n = t.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for g in t.signed_generators() {
            let w = g.apply(u);
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// The tree arc joining a vertex to its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeArc {
    pub parent: usize,
    pub color: usize,
    /// `true` when the arc runs parent -> child, i.e. `parent^(a_color) = child`.
    pub forward: bool,
}

impl TreeArc {
    /// Letter read when walking from the parent down to the child.
    #[inline]
    pub fn down_letter(&self) -> Letter {
        if self.forward { Letter::plus(self.color) } else { Letter::minus(self.color) }
    }
}

/// A rooted spanning tree of a permutation digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<Option<TreeArc>>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent_arc(&self, v: usize) -> Option<TreeArc> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Vertices in breadth-first order from the root; parents precede children.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Tree arcs as `(initial vertex, color)` pairs, in discovery order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order[1..].iter().map(move |&v| {
            let arc = self.parent[v].expect("non-root vertices have a parent");
            if arc.forward { (arc.parent, arc.color) } else { (v, arc.color) }
        })
    }

    pub fn arc_count(&self) -> usize {
        self.order.len() - 1
    }

    /// The word spelled by the unique tree path from `from` to `to`.
    pub fn path_word(&self, from: usize, to: usize) -> Word {
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut x, mut y) = (from, to);
        while self.depth[x] > self.depth[y] {
            let arc = self.parent[x].expect("deeper than root");
            up.push(arc.down_letter().inverse());
            x = arc.parent;
        }
        while self.depth[y] > self.depth[x] {
            let arc = self.parent[y].expect("deeper than root");
            down.push(arc.down_letter());
            y = arc.parent;
        }
        while x != y {
            let ax = self.parent[x].expect("below the common ancestor");
            let ay = self.parent[y].expect("below the common ancestor");
            up.push(ax.down_letter().inverse());
            down.push(ay.down_letter());
            x = ax.parent;
            y = ay.parent;
        }
        up.extend(down.into_iter().rev());
        Word::new(up)
    }

    /// Roots a set of `n - 1` tree edges `(ini, ter, color)` at `root`.
    fn from_edges(n: usize, root: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
        for &(ini, ter, color) in edges {
            adjacency[ini].push((ter, color, true));
            adjacency[ter].push((ini, color, false));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, color, forward) in &adjacency[u] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(TreeArc { parent: u, color, forward });
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n || edges.len() + 1 != n {
            return Err(Error::NotTransitive);
        }
        Ok(Self { root, parent, depth, order })
    }
}

/// Breadth-first spanning tree over arcs of all colors, ignoring direction.
///
/// From each vertex the neighbors are explored color by color, the forward
/// arc `u -> u^(a_k)` before the backward arc `u -> u^(a_k^-1)`.
pub fn bfs_tree(t: &PermTuple, root: usize) -> Result<SpanningTree> {
    BfsGrower::new(t, root)?.finish()
}

/// A [`bfs_tree`] grown only as far as its vertices are requested.
#[derive(Debug, Clone)]
pub struct BfsGrower<'t> {
    t: &'t PermTuple,
    tree: SpanningTree,
    visited: Vec<bool>,
    expanded: usize,
}

impl<'t> BfsGrower<'t> {
    pub fn new(t: &'t PermTuple, root: usize) -> Result<Self> {
        let n = t.n();
        if root >= n {
            return Err(Error::InvalidVertex { vertex: root, n });
        }
        let mut visited = vec![false; n];
        visited[root] = true;
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let tree = SpanningTree { root, parent: vec![None; n], depth: vec![0; n], order };
        Ok(Self { t, tree, visited, expanded: 0 })
    }

    fn expand_next(&mut self) {
        let u = self.tree.order[self.expanded];
        self.expanded += 1;
        for color in 0..self.t.d() {
            for forward in [true, false] {
                let w = if forward { self.t.perm(color).apply(u) } else { self.t.inverse(color).apply(u) };
                if !self.visited[w] {
                    self.visited[w] = true;
                    self.tree.parent[w] = Some(TreeArc { parent: u, color, forward });
                    self.tree.depth[w] = self.tree.depth[u] + 1;
                    self.tree.order.push(w);
                }
            }
        }
    }

    /// The `idx`-th vertex in breadth-first order, or `None` past the end of
    /// the component of the root.
    pub fn vertex(&mut self, idx: usize) -> Option<usize> {
        while self.tree.order.len() <= idx && self.expanded < self.tree.order.len() {
            self.expand_next();
        }
        self.tree.order.get(idx).copied()
    }

    /// The tree so far. Parent arcs and depths are final for every vertex
    /// already in [`SpanningTree::order`].
    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn finish(mut self) -> Result<SpanningTree> {
        while self.expanded < self.tree.order.len() {
            self.expand_next();
        }
        if self.tree.order.len() != self.t.n() {
            return Err(Error::NotTransitive);
        }
        Ok(self.tree)
    }
}

/// Spanning tree made of the cycles of `a_j`, each minus one arc, joined by
/// `lambda - 1` arcs of other colors, where `lambda` is the cycle count of `a_j`.
///
/// The connecting arcs come from a breadth-first search that marks a whole
/// `a_j`-cycle visited as soon as one of its vertices is reached. From each
/// cycle the color-`j` arc leaving its largest vertex is dropped.
pub fn lambda_tree(t: &PermTuple, j: usize, root: usize) -> Result<SpanningTree> {
    t.check_color(j)?;
    let n = t.n();
    if root >= n {
        return Err(Error::InvalidVertex { vertex: root, n });
    }
    let d = t.d();
    let aj = t.perm(j);
    let mut visited = vec![false; n];
    let mut queue = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));

    // marks the cycle through `start`, queues its vertices and records its arcs
    let absorb_cycle = |start: usize,
                            visited: &mut Vec<bool>,
                            queue: &mut Vec<usize>,
                            edges: &mut Vec<(usize, usize, usize)>| {
        let mut max_vertex = start;
        let mut x = start;
        loop {
            visited[x] = true;
            queue.push(x);
            max_vertex = max_vertex.max(x);
            x = aj.apply(x);
            if x == start {
                break;
            }
        }
        let mut x = start;
        loop {
            let next = aj.apply(x);
            if x != max_vertex {
                edges.push((x, next, j));
            }
            x = next;
            if x == start {
                break;
            }
        }
    };

    absorb_cycle(root, &mut visited, &mut queue, &mut edges);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for color in (0..d).filter(|&c| c != j) {
            for forward in [true, false] {
                let w = if forward { t.perm(color).apply(u) } else { t.inverse(color).apply(u) };
                if !visited[w] {
                    if forward {
                        edges.push((u, w, color));
                    } else {
                        edges.push((w, u, color));
                    }
                    absorb_cycle(w, &mut visited, &mut queue, &mut edges);
                }
            }
        }
    }
    if queue.len() != n {
        return Err(Error::NotTransitive);
    }
    SpanningTree::from_edges(n, root, &edges)
}

/// Free-function form of [`SpanningTree::path_word`].
pub fn tree_path_word(tree: &SpanningTree, from: usize, to: usize) -> Word {
    tree.path_word(from, to)
}
