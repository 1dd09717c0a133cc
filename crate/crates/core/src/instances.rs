//! Seeded random instances: conjugated pairs and the `(a, a_1^2)` non-isomorphic
//! construction.
//!
//! All randomness comes from `ChaCha8Rng` seeded with the spec's seed. The
//! tuple `a` draws from stream 0 and the conjugator `tau` from stream 1, so the
//! two do not interfere when resampling changes how much either consumes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::digraph::{is_transitive, PermTuple};
use crate::error::{Error, Result};
use crate::perm::Permutation;

const TUPLE_STREAM: u64 = 0;
const CONJUGATOR_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    IsoTransitive,
    NonisoTransitive,
    IsoNcycle,
    NonisoNcycle,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] =
        [InstanceKind::IsoTransitive, InstanceKind::NonisoTransitive, InstanceKind::IsoNcycle, InstanceKind::NonisoNcycle];

    pub fn is_iso(self) -> bool {
        matches!(self, InstanceKind::IsoTransitive | InstanceKind::IsoNcycle)
    }

    pub fn is_ncycle(self) -> bool {
        matches!(self, InstanceKind::IsoNcycle | InstanceKind::NonisoNcycle)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::IsoTransitive => "iso",
            InstanceKind::NonisoTransitive => "noniso",
            InstanceKind::IsoNcycle => "iso-ncycle",
            InstanceKind::NonisoNcycle => "noniso-ncycle",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown instance kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub n: usize,
    /// Generators before the extra `a_1^2` of the non-isomorphic kinds.
    pub d: usize,
    pub kind: InstanceKind,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(n: usize, d: usize, kind: InstanceKind, seed: u64) -> Self {
        Self { n, d, kind, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidSpec("d must be at least 1".into()));
        }
        let min_n = if self.kind.is_iso() { 2 } else { 3 };
        if self.n < min_n {
            return Err(Error::InvalidSpec(format!("{} instances need n >= {min_n}", self.kind)));
        }
        Ok(())
    }

    /// A generator on the given substream of this spec's seed.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// A generated pair with its planted conjugator, when it has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub a: PermTuple,
    pub b: PermTuple,
    pub planted: Option<Permutation>,
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images_unchecked(images)
}

/// A uniform random `n`-cycle.
pub fn random_n_cycle<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut images = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        images[v] = order[(i + 1) % n];
    }
    Permutation::from_images_unchecked(images)
}

/// `d` uniform permutations, the whole tuple resampled until transitive.
pub fn gen_transitive_tuple<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<PermTuple> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidSpec("n and d must be at least 1".into()));
    }
    loop {
        let t = PermTuple::new((0..d).map(|_| random_permutation(n, rng)).collect())?;
        if is_transitive(&t) {
            return Ok(t);
        }
    }
}

/// A random `n`-cycle followed by `d - 1` uniform permutations.
fn gen_ncycle_tuple<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<PermTuple> {
    let mut perms = vec![random_n_cycle(n, rng)];
    perms.extend((1..d).map(|_| random_permutation(n, rng)));
    PermTuple::new(perms)
}

fn gen_first_tuple<R: Rng + ?Sized>(spec: &InstanceSpec, rng: &mut R) -> Result<PermTuple> {
    if spec.kind.is_ncycle() {
        gen_ncycle_tuple(spec.n, spec.d, rng)
    } else {
        gen_transitive_tuple(spec.n, spec.d, rng)
    }
}

/// `a` random and transitive, `b_k = tau^-1 a_k tau` for a uniform `tau`.
pub fn gen_iso_pair(spec: &InstanceSpec) -> Result<(PermTuple, PermTuple, Permutation)> {
    spec.validate()?;
    if !spec.kind.is_iso() {
        return Err(Error::InvalidSpec(format!("{} is not an isomorphic kind", spec.kind)));
    }
    let a = gen_first_tuple(spec, &mut spec.rng(TUPLE_STREAM))?;
    let tau = random_permutation(spec.n, &mut spec.rng(CONJUGATOR_STREAM));
    let b = a.conjugate_by(&tau)?;
    Ok((a, b, tau))
}

/// `(a_1, ..., a_d, a_1^2)` against `(tau^-1 a_1 tau, ..., tau^-1 a_d tau, a_1^2)`
/// with `a_1^2 != 1` and `tau` not commuting with `a_1^2`.
pub fn gen_noniso_pair(spec: &InstanceSpec) -> Result<(PermTuple, PermTuple)> {
    spec.validate()?;
    if spec.kind.is_iso() {
        return Err(Error::InvalidSpec(format!("{} is not a non-isomorphic kind", spec.kind)));
    }
    let mut rng = spec.rng(TUPLE_STREAM);
    let (a, square) = loop {
        let a = gen_first_tuple(spec, &mut rng)?;
        let square = a.perm(0).compose(a.perm(0))?;
        if !square.is_identity() {
            break (a, square);
        }
    };
    let mut rng = spec.rng(CONJUGATOR_STREAM);
    let tau = loop {
        let tau = random_permutation(spec.n, &mut rng);
        if tau.compose(&square)? != square.compose(&tau)? {
            break tau;
        }
    };
    let b = a.conjugate_by(&tau)?;
    let mut left = a.into_perms();
    left.push(square.clone());
    let mut right = b.into_perms();
    right.push(square);
    Ok((PermTuple::new(left)?, PermTuple::new(right)?))
}

/// Dispatches on the spec's kind.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    if spec.kind.is_iso() {
        let (a, b, tau) = gen_iso_pair(spec)?;
        Ok(Instance { spec: *spec, a, b, planted: Some(tau) })
    } else {
        let (a, b) = gen_noniso_pair(spec)?;
        Ok(Instance { spec: *spec, a, b, planted: None })
    }
}
