//! Linear-time test for tuples in which one color is an `n`-cycle.
//!
//! Relabel each digraph so that color `j` becomes `i -> i + 1 mod n`. Every
//! other arc `i -> i^(a_k)` is then described by its offset along the
//! reference cycle, `(i^(a_k) - i) mod n`, and color-`j` arcs by the symbol
//! `n`. Concatenating the offsets vertex by vertex gives a string of length
//! `d n`; two digraphs are color-isomorphic iff their strings are rotations of
//! each other, which Knuth-Morris-Pratt decides in linear time.

use std::time::Instant;

use crate::digraph::PermTuple;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::refinement::{SolveOutcome, SolveStats};

/// The offset string of a relabeled digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedDigraph {
    /// `code[i * d + k]` is the offset of the color-`k` arc leaving vertex `i`.
    pub code: Vec<u32>,
    /// `relabel[v]` is the position of original vertex `v` on the reference cycle.
    pub relabel: Permutation,
    /// The inverse of `relabel`: the vertex at each position.
    pub order: Vec<u32>,
    pub base_color: usize,
}

/// Offsets and the color-`j` symbol `n` are stored as `u32`.
fn symbol_bound(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::TooLarge { n, max: u32::MAX as usize })
}

/// Position of every vertex along the `n`-cycle `a_j`, starting from vertex 0,
/// and the vertices in that order. The walk is a chain of dependent loads, so
/// it runs on a 32-bit copy of `a_j` to keep more of the chain in cache.
fn cycle_positions(t: &PermTuple, j: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    t.check_color(j)?;
    symbol_bound(t.n())?;
    let aj: Vec<u32> = t.perm(j).images().iter().map(|&v| v as u32).collect();
    let mut pos = vec![0; t.n()];
    let mut order = Vec::with_capacity(t.n());
    let mut v = 0;
    for i in 0..t.n() as u32 {
        if i > 0 && v == 0 {
            return Err(Error::NotAnNCycle { color: j });
        }
        pos[v as usize] = i;
        order.push(v);
        v = aj[v as usize];
    }
    Ok((pos, order))
}

fn widen(pos: &[u32]) -> Permutation {
    Permutation::from_images_unchecked(pos.iter().map(|&p| p as usize).collect())
}

/// Relabels `t` so that `a_j` becomes the standard cycle `i -> i + 1 mod n`.
///
/// Returns the relabeled tuple and `rho`, where `rho[v]` is the new label of
/// `v`; the new generators are `rho^-1 a_k rho`.
pub fn canonical_relabel(t: &PermTuple, j: usize) -> Result<(PermTuple, Permutation)> {
    let rho = widen(&cycle_positions(t, j)?.0);
    let relabeled = t.conjugate_by(&rho)?;
    Ok((relabeled, rho))
}

/// Offset string of a tuple already relabeled so that `a_j` is standard.
pub fn encode(t: &PermTuple, j: usize) -> Result<EncodedDigraph> {
    t.check_color(j)?;
    let n = symbol_bound(t.n())?;
    let d = t.d();
    let mut code = vec![0; t.n() * d];
    for (k, ak) in t.perms().iter().enumerate() {
        for i in 0..t.n() {
            code[i * d + k] = if k == j { n } else { ((ak.apply(i) + t.n() - i) % t.n()) as u32 };
        }
    }
    Ok(EncodedDigraph { code, relabel: Permutation::identity(t.n()), order: (0..n).collect(), base_color: j })
}

/// Relabels and encodes without materializing the relabeled tuple.
fn encode_relabeled(t: &PermTuple, j: usize) -> Result<EncodedDigraph> {
    let n = symbol_bound(t.n())?;
    let (pos, order) = cycle_positions(t, j)?;
    let d = t.d();
    let images: Vec<&[usize]> = t.perms().iter().map(Permutation::images).collect();
    // rows are filled in original vertex order, then gathered along the cycle;
    // scattering them straight to their final place is much slower
    let mut by_vertex = vec![0; t.n() * d];
    for (v, row) in by_vertex.chunks_exact_mut(d).enumerate() {
        let i = pos[v];
        for (slot, ak) in row.iter_mut().zip(&images) {
            let h = pos[ak[v]];
            *slot = if h >= i { h - i } else { h + n - i };
        }
        row[j] = n;
    }
    let mut code = Vec::with_capacity(by_vertex.len());
    for &v in &order {
        let v = v as usize;
        code.extend_from_slice(&by_vertex[v * d..(v + 1) * d]);
    }
    Ok(EncodedDigraph { code, relabel: widen(&pos), order, base_color: j })
}

/// KMP failure function over `len` symbols: `fail[q]` is the length of the
/// longest proper border of `pattern[..=q]`. Lengths are stored as `u32`, so
/// the pattern must be shorter than `2^32`.
fn failure_function(len: usize, eq: impl Fn(usize, usize) -> bool) -> Vec<u32> {
    let mut fail = vec![0u32; len];
    let mut q = 0;
    for i in 1..len {
        while q > 0 && !eq(q, i) {
            q = fail[q - 1] as usize;
        }
        if eq(q, i) {
            q += 1;
        }
        fail[i] = q as u32;
    }
    fail
}

/// Smallest left rotation of `x` that equals `y`, over `m` symbols compared by
/// `pattern_eq(q, i)` (is `y[q] == y[i]`) and `text_eq(q, i)` (is `y[q] == x[i]`).
/// The doubled text is indexed modulo `m` rather than built.
fn kmp_rotation(
    m: usize,
    pattern_eq: impl Fn(usize, usize) -> bool,
    text_eq: impl Fn(usize, usize) -> bool,
) -> Result<Option<usize>> {
    if m == 0 {
        return Ok(Some(0));
    }
    if m > u32::MAX as usize {
        return Err(Error::TooLarge { n: m, max: u32::MAX as usize });
    }
    let fail = failure_function(m, pattern_eq);
    let mut q = 0;
    // a match must start before position m, so it ends before 2m - 1
    for i in 0..(2 * m - 1) {
        let c = if i < m { i } else { i - m };
        while q > 0 && !text_eq(q, c) {
            q = fail[q - 1] as usize;
        }
        if text_eq(q, c) {
            q += 1;
        }
        if q == m {
            return Ok(Some(i + 1 - m));
        }
    }
    Ok(None)
}

/// Smallest `s` such that `y` is `x` rotated left by `s`
/// (`y[p] = x[(p + s) mod |x|]`), found by scanning `x x` with KMP.
pub fn cyclic_equivalent<T: Eq>(x: &[T], y: &[T]) -> Result<Option<usize>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    kmp_rotation(x.len(), |q, i| y[q] == y[i], |q, i| y[q] == x[i])
}

/// As [`cyclic_equivalent`], treating each run of `width` symbols as one
/// letter, so only rotations by whole rows are found. Returns the shift in rows.
pub fn cyclic_equivalent_rows<T: Eq>(x: &[T], y: &[T], width: usize) -> Result<Option<usize>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if width == 0 || !x.len().is_multiple_of(width) {
        return Err(Error::Contract(format!("length {} is not a multiple of the row width {width}", x.len())));
    }
    let (xs, ys) = (|i: usize| &x[i * width..(i + 1) * width], |i: usize| &y[i * width..(i + 1) * width]);
    kmp_rotation(x.len() / width, |q, i| ys(q) == ys(i), |q, i| ys(q) == xs(i))
}

/// Decides simultaneous conjugacy when `a_j` and `b_j` are both `n`-cycles.
pub fn solve_ncycle(a: &PermTuple, b: &PermTuple, j: usize) -> Result<SolveOutcome> {
    a.check_same_shape(b)?;
    let start = Instant::now();
    let ea = encode_relabeled(a, j)?;
    let eb = encode_relabeled(b, j)?;
    let setup = start.elapsed();

    let t0 = Instant::now();
    let shift = cyclic_equivalent_rows(&ea.code, &eb.code, a.d())?;
    let mut stats = SolveStats { setup, distinguish: t0.elapsed(), ..SolveStats::default() };

    let Some(k) = shift else {
        stats.total = start.elapsed();
        return Ok(SolveOutcome::not_isomorphic(None, 1, stats));
    };
    // Delta_i(b') = Delta_{i+k}(a'), so position i of a' maps to i - k of b'
    let n = a.n();
    let mut images = vec![0; n];
    for (i, &v) in ea.order.iter().enumerate() {
        images[v as usize] = eb.order[if i >= k { i - k } else { i + n - k }] as usize;
    }
    let tau = Permutation::from_images_unchecked(images);
    stats.total = start.elapsed();
    Ok(SolveOutcome::isomorphic(tau, 1, stats))
}
