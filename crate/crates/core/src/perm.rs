//! Permutations of `{0, .., n-1}` stored as image arrays.
//!
//! Products are read left to right: in `g.compose(&h)` the permutation `g`
//! acts first, so `i^(gh) = (i^g)^h`. Under this convention the tuple `b` is
//! conjugate to `a` by `tau` when `b_k = tau^-1 a_k tau`, i.e. when `tau`
//! maps every arc `i -> i^(a_k)` onto the arc `i^tau -> (i^tau)^(b_k)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image array, checking bijectivity.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("a permutation needs at least one point".into()));
        }
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} of point {i} is outside 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("point {x} is hit twice")));
            }
        }
        Ok(Self { images })
    }

    /// Wraps an image array the caller already knows to be a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok());
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "a permutation needs at least one point");
        Self { images: (0..n).collect() }
    }

    /// Builds a permutation from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("a permutation needs at least one point".into()));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!("cycle point {x} is outside 0..{n}")));
                }
                if std::mem::replace(&mut touched[x], true) {
                    return Err(Error::InvalidPermutation(format!("point {x} appears in two cycles")));
                }
                images[x] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    /// The standard n-cycle `i -> i + 1 mod n`.
    pub fn standard_cycle(n: usize) -> Self {
        assert!(n >= 1, "a permutation needs at least one point");
        Self { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `tau^-1 self tau`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<Permutation> {
        if self.degree() != tau.degree() {
            return Err(Error::SizeMismatch { left: self.degree(), right: tau.degree() });
        }
        // i^(tau^-1 g tau): the point i^(tau^-1) = x is sent to x^g, then to (x^g)^tau,
        // so the result maps x^tau to (x^g)^tau.
        let mut images = vec![0; self.degree()];
        for (x, &gx) in self.images.iter().enumerate() {
            images[tau.images[x]] = tau.images[gx];
        }
        Ok(Permutation { images })
    }

    /// `self^e` for any non-negative `e`, by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base).expect("same degree");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same degree");
            }
        }
        result
    }

    /// Cycles listed in order of their minimum point, each starting at it.
    /// Fixed points appear as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        CycleType { lengths }
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    pub fn is_n_cycle(&self) -> bool {
        let n = self.degree();
        let mut x = 0;
        for step in 1..=n {
            x = self.images[x];
            if x == 0 {
                return step == n;
            }
        }
        false
    }

    /// Order of the permutation (lcm of its cycle lengths), or `None` when it
    /// does not fit in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.cycle_type().order()
    }

    pub fn power_table(&self) -> PowerTable {
        PowerTable::new(self)
    }

    /// One-based cycle notation, omitting fixed points, e.g. `(1,2,3)(4,5)`.
    pub fn to_cycle_string(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            s.push('(');
            let parts: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

/// Multiset of cycle lengths, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    lengths: Vec<usize>,
}

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn degree(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn order(&self) -> Option<u64> {
        let mut lcm: u64 = 1;
        let mut distinct = self.lengths.clone();
        distinct.dedup();
        for &len in &distinct {
            let len = len as u64;
            lcm = (lcm / gcd(lcm, len)).checked_mul(len)?;
        }
        Some(lcm)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Repeated squares `g^2, g^4, .., g^(2^floor(log2 n))` of a permutation.
#[derive(Debug, Clone)]
pub struct PowerTable {
    base: Permutation,
    squares: Vec<Permutation>,
}

impl PowerTable {
    pub fn new(g: &Permutation) -> Self {
        let n = g.degree();
        let levels = n.ilog2() as usize;
        let mut squares: Vec<Permutation> = Vec::with_capacity(levels);
        let mut current = g.clone();
        for _ in 0..levels {
            current = current.compose(&current).expect("same degree");
            squares.push(current.clone());
        }
        Self { base: g.clone(), squares }
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    /// `entries()[k]` is `g^(2^(k+1))`.
    pub fn entries(&self) -> &[Permutation] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// `point^(g^p)` for `0 <= p < n`, one table lookup per set bit of `p`.
    pub fn eval_power(&self, p: usize, point: usize) -> Result<usize> {
        let n = self.base.degree();
        if p >= n {
            return Err(Error::ExponentOutOfRange { exponent: p, n });
        }
        Ok(self.eval_power_unchecked(p, point))
    }

    #[inline]
    pub(crate) fn eval_power_unchecked(&self, p: usize, point: usize) -> usize {
        let mut x = point;
        if p & 1 == 1 {
            x = self.base.images[x];
        }
        let mut rest = p >> 1;
        let mut level = 0;
        while rest > 0 {
            if rest & 1 == 1 {
                x = self.squares[level].images[x];
            }
            rest >>= 1;
            level += 1;
        }
        x
    }
}

/// Free-function form of [`PowerTable::eval_power`].
pub fn eval_power(table: &PowerTable, p: usize, point: usize) -> Result<usize> {
    table.eval_power(p, point)
}
