//! Evaluating the product of a long word on a set of points.
//!
//! Three backends compute the same map:
//! - naive: one generator application per letter per point;
//! - reduced: truncated repeated squaring of the generator set, which shortens
//!   the word by a factor of `2^nu` at the cost of a dictionary of
//!   `d'^(2^nu) = O(sqrt m)` precomputed products;
//! - power table: for words made of long runs of one color `j` separated by a
//!   few other letters, each run `a_j^p` costs `O(log n)` via the binary
//!   expansion of `p` and precomputed squares of `a_j` and `a_j^-1`.

use std::borrow::Cow;

use crate::digraph::{Letter, PermTuple, Sign, Word};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PowerTable};

/// A word over an enlarged dictionary of permutations.
#[derive(Debug, Clone)]
pub struct ReducedWord<'a> {
    dictionary: Cow<'a, [Permutation]>,
    word: Vec<usize>,
    levels: u32,
}

impl<'a> ReducedWord<'a> {
    pub fn dictionary(&self) -> &[Permutation] {
        &self.dictionary
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Number of squaring rounds performed (`nu`), zero when the input was
    /// returned unchanged.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.word.iter().fold(point, |x, &s| self.dictionary[s].apply(x))
    }
}

/// Number of squaring rounds for a word of length `m` over `alphabet`
/// generators: the `nu` with `log_d(m)/4 < 2^nu <= log_d(m)/2`, or zero
/// when `m < d^4` or the alphabet has fewer than two symbols.
///
/// Evaluated in integers: `2^nu <= log_d(m)/2` iff `d^(2^(nu+1)) <= m`.
pub fn reduction_levels(alphabet: usize, m: usize) -> u32 {
    if alphabet < 2 || (m as u128) < (alphabet as u128).pow(4) {
        return 0;
    }
    let fits = |nu: u32| -> bool {
        let exp = 1u32 << (nu + 1);
        match (alphabet as u128).checked_pow(exp) {
            Some(v) => v <= m as u128,
            None => false,
        }
    };
    let mut nu = 1;
    while fits(nu + 1) {
        nu += 1;
    }
    debug_assert!(fits(nu) && !fits(nu + 1));
    nu
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symbol {
    Level(usize),
    Tail,
    Pad,
}

/// Shortens `word` (indices into `generators`) by truncated repeated squaring.
pub fn word_reduce<'a>(generators: &'a [Permutation], word: &[usize]) -> Result<ReducedWord<'a>> {
    let alphabet = generators.len();
    if alphabet == 0 {
        return Err(Error::EmptyTuple);
    }
    if let Some(&bad) = word.iter().find(|&&s| s >= alphabet) {
        return Err(Error::InvalidColor { color: bad, d: alphabet });
    }
    let n = generators[0].degree();
    let nu = reduction_levels(alphabet, word.len());
    if nu == 0 {
        return Ok(ReducedWord { dictionary: Cow::Borrowed(generators), word: word.to_vec(), levels: 0 });
    }

    let mut level: Vec<Permutation> = generators.to_vec();
    let mut tail = Permutation::identity(n);
    let mut current: Vec<Symbol> = word.iter().map(|&s| Symbol::Level(s)).collect();

    for _ in 0..nu {
        let size = level.len();
        if current.len() % 2 == 1 {
            current.push(Symbol::Pad);
        }
        let pairs = current.len() / 2;
        let mut next = Vec::with_capacity(pairs);
        for (idx, pair) in current.chunks_exact(2).enumerate() {
            if idx + 1 == pairs {
                // the last letter of each round is carried as a separate permutation
                let resolve = |s: Symbol| -> Option<&Permutation> {
                    match s {
                        Symbol::Level(i) => Some(&level[i]),
                        Symbol::Tail => Some(&tail),
                        Symbol::Pad => None,
                    }
                };
                let merged = match (resolve(pair[0]), resolve(pair[1])) {
                    (Some(x), Some(y)) => x.compose(y)?,
                    (Some(x), None) => x.clone(),
                    (None, Some(y)) => y.clone(),
                    (None, None) => Permutation::identity(n),
                };
                tail = merged;
                next.push(Symbol::Tail);
            } else {
                match (pair[0], pair[1]) {
                    (Symbol::Level(i), Symbol::Level(j)) => next.push(Symbol::Level(i * size + j)),
                    _ => return Err(Error::Internal("tail or padding before the last letter".into())),
                }
            }
        }
        let mut squared = Vec::with_capacity(size * size);
        for x in &level {
            for y in &level {
                squared.push(x.compose(y)?);
            }
        }
        level = squared;
        current = next;
    }

    let tail_index = level.len();
    level.push(tail);
    let word = current
        .into_iter()
        .map(|s| match s {
            Symbol::Level(i) => Ok(i),
            Symbol::Tail => Ok(tail_index),
            Symbol::Pad => Err(Error::Internal("padding survived the last round".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReducedWord { dictionary: Cow::Owned(level), word, levels: nu })
}

/// Images of `points` under the product named by a reduced word.
pub fn eval_reduced(rw: &ReducedWord<'_>, points: &[usize]) -> Vec<usize> {
    points.iter().map(|&p| rw.apply(p)).collect()
}

/// Naive left-to-right evaluation of a word of generator indices.
pub fn eval_naive(generators: &[Permutation], word: &[usize], point: usize) -> usize {
    word.iter().fold(point, |x, &s| generators[s].apply(x))
}

/// One run `a_j^(sign * exponent)` optionally followed by a letter of another color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub exponent: usize,
    pub sign: Sign,
    pub separator: Option<Letter>,
}

/// A word rewritten as alternating runs of the base color and single other letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaWord {
    base_color: usize,
    segments: Vec<Segment>,
}

impl LambdaWord {
    pub fn base_color(&self) -> usize {
        self.base_color
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn separator_count(&self) -> usize {
        self.segments.iter().filter(|s| s.separator.is_some()).count()
    }
}

/// Per-tuple data for the power-table backend: the base color `j` and the
/// squares of `a_j` and `a_j^-1`.
#[derive(Debug, Clone)]
pub struct LambdaBase {
    color: usize,
    n: usize,
    order: Option<u64>,
    cycle_count: usize,
    forward: PowerTable,
    backward: PowerTable,
}

impl LambdaBase {
    pub fn new(t: &PermTuple, color: usize) -> Result<Self> {
        t.check_color(color)?;
        let aj = t.perm(color);
        let cycle_type = aj.cycle_type();
        Ok(Self {
            color,
            n: t.n(),
            order: cycle_type.order(),
            cycle_count: cycle_type.cycle_count(),
            forward: aj.power_table(),
            backward: t.inverse(color).power_table(),
        })
    }

    pub fn color(&self) -> usize {
        self.color
    }

    /// Number of cycles of `a_j`.
    pub fn cycle_count(&self) -> usize {
        self.cycle_count
    }

    pub fn order(&self) -> Option<u64> {
        self.order
    }

    pub fn forward_table(&self) -> &PowerTable {
        &self.forward
    }

    pub fn backward_table(&self) -> &PowerTable {
        &self.backward
    }

    fn table(&self, sign: Sign) -> &PowerTable {
        match sign {
            Sign::Plus => &self.forward,
            Sign::Minus => &self.backward,
        }
    }
}

/// Rewrites `word` as runs of the base color separated by other letters.
///
/// Mixed runs of `j^+1` and `j^-1` are cancelled to their net exponent,
/// which is then reduced modulo the order of `a_j`. A run whose reduced
/// exponent is still `>= n` is split into consecutive segments with
/// exponents below `n`. Fails when the word has more than `max_separators`
/// letters of other colors.
pub fn parse_lambda_word(word: &Word, base: &LambdaBase, max_separators: usize) -> Result<LambdaWord> {
    let j = base.color;
    let off_base = word.letters().iter().filter(|l| l.color != j).count();
    if off_base > max_separators {
        return Err(Error::Contract(format!(
            "word has {off_base} letters off color {j}, at most {max_separators} allowed"
        )));
    }
    let mut segments = Vec::with_capacity(off_base + 1);
    let mut net: i64 = 0;
    for &letter in word.letters() {
        if letter.color == j {
            net += letter.sign.as_i8() as i64;
        } else {
            push_run(&mut segments, base, net, Some(letter));
            net = 0;
        }
    }
    push_run(&mut segments, base, net, None);
    Ok(LambdaWord { base_color: j, segments })
}

fn push_run(segments: &mut Vec<Segment>, base: &LambdaBase, net: i64, separator: Option<Letter>) {
    let sign = if net < 0 { Sign::Minus } else { Sign::Plus };
    let mut p = net.unsigned_abs();
    if let Some(order) = base.order {
        p %= order;
    }
    let n = base.n as u64;
    if n == 1 {
        p = 0;
    }
    while p >= n {
        segments.push(Segment { exponent: base.n - 1, sign, separator: None });
        p -= n - 1;
    }
    segments.push(Segment { exponent: p as usize, sign, separator });
}

/// Images of `points` under the product named by a parsed word.
pub fn eval_lambda(lw: &LambdaWord, base: &LambdaBase, t: &PermTuple, points: &[usize]) -> Vec<usize> {
    debug_assert_eq!(lw.base_color, base.color);
    points
        .iter()
        .map(|&p| {
            lw.segments.iter().fold(p, |x, seg| {
                let y = base.table(seg.sign).eval_power_unchecked(seg.exponent, x);
                match seg.separator {
                    Some(l) => t.step(l, y),
                    None => y,
                }
            })
        })
        .collect()
}

/// How the image of a word on a set of points is computed.
#[derive(Debug, Clone, Copy)]
pub enum Evaluator<'a> {
    Naive,
    Reduced,
    PowerTable { base: &'a LambdaBase, max_separators: usize },
}

impl Evaluator<'_> {
    /// Images of `points` under `t`'s product for `word`.
    pub fn images(&self, t: &PermTuple, word: &Word, points: &[usize]) -> Result<Vec<usize>> {
        match *self {
            Evaluator::Naive => Ok(points.iter().map(|&p| crate::digraph::walk_eval(t, word, p)).collect()),
            Evaluator::Reduced => {
                let indices: Vec<usize> = word.letters().iter().map(|&l| t.letter_index(l)).collect();
                let rw = word_reduce(t.signed_generators(), &indices)?;
                Ok(eval_reduced(&rw, points))
            }
            Evaluator::PowerTable { base, max_separators } => {
                let lw = parse_lambda_word(word, base, max_separators)?;
                Ok(eval_lambda(&lw, base, t, points))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::new(v).unwrap()
    }

    #[test]
    fn levels_follow_the_bracket() {
        assert_eq!(reduction_levels(2, 10), 0);
        assert_eq!(reduction_levels(2, 15), 0);
        // log2(16) = 4: 2^nu in (1, 2] -> nu = 1
        assert_eq!(reduction_levels(2, 16), 1);
        // log2(256) = 8: 2^nu in (2, 4] -> nu = 2
        assert_eq!(reduction_levels(2, 256), 2);
        assert_eq!(reduction_levels(2, 255), 1);
        assert_eq!(reduction_levels(1, 10_000), 0);
        // log6(2000) ~ 4.24: 2^nu in (1.06, 2.12] -> nu = 1
        assert_eq!(reduction_levels(6, 2000), 1);
    }

    #[test]
    fn short_words_are_returned_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gens = vec![random_perm(9, &mut rng), random_perm(9, &mut rng)];
        let word = vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 1];
        let rw = word_reduce(&gens, &word).unwrap();
        assert_eq!(rw.levels(), 0);
        assert_eq!(rw.word(), &word[..]);
        assert_eq!(rw.dictionary().len(), 2);
    }

    #[test]
    fn reduction_of_length_256() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gens = vec![random_perm(20, &mut rng), random_perm(20, &mut rng)];
        let word: Vec<usize> = (0..256).map(|_| rng.gen_range(0..2)).collect();
        let rw = word_reduce(&gens, &word).unwrap();
        assert_eq!(rw.levels(), 2);
        assert_eq!(rw.word().len(), 64);
        assert_eq!(rw.dictionary().len(), 17);
        for p in 0..20 {
            assert_eq!(rw.apply(p), eval_naive(&gens, &word, p));
        }
    }

    #[test]
    fn reduction_matches_naive_on_long_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base: Vec<Permutation> = (0..3).map(|_| random_perm(50, &mut rng)).collect();
        let mut gens = base.clone();
        gens.extend(base.iter().map(Permutation::inverse));
        let word: Vec<usize> = (0..2000).map(|_| rng.gen_range(0..6)).collect();
        let rw = word_reduce(&gens, &word).unwrap();
        assert_eq!(rw.levels(), 1);
        assert_eq!(rw.word().len(), 1000);
        let all: Vec<usize> = (0..50).collect();
        let expected: Vec<usize> = all.iter().map(|&p| eval_naive(&gens, &word, p)).collect();
        assert_eq!(eval_reduced(&rw, &all), expected);
    }

    #[test]
    fn odd_lengths_are_padded() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens = vec![random_perm(7, &mut rng), random_perm(7, &mut rng)];
        for m in [16usize, 17, 31, 33, 255, 257, 1023] {
            let word: Vec<usize> = (0..m).map(|_| rng.gen_range(0..2)).collect();
            let rw = word_reduce(&gens, &word).unwrap();
            let nu = rw.levels();
            assert_eq!(rw.word().len(), m.div_ceil(1 << nu));
            for p in 0..7 {
                assert_eq!(rw.apply(p), eval_naive(&gens, &word, p));
            }
        }
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert_eq!(word_reduce(&[], &[]).unwrap_err(), Error::EmptyTuple);
        let gens = vec![Permutation::identity(3)];
        assert!(word_reduce(&gens, &[1]).is_err());
        // one generator: nothing to square against, returned as is
        let rw = word_reduce(&gens, &[0; 100]).unwrap();
        assert_eq!(rw.levels(), 0);
    }

    #[test]
    fn empty_and_single_letter_words() {
        let gens = vec![Permutation::standard_cycle(4), Permutation::identity(4)];
        let rw = word_reduce(&gens, &[]).unwrap();
        assert_eq!(eval_reduced(&rw, &[0, 1, 2, 3]), vec![0, 1, 2, 3]);
        let rw = word_reduce(&gens, &[0]).unwrap();
        assert_eq!(eval_reduced(&rw, &[0, 1, 2, 3]), vec![1, 2, 3, 0]);
    }

    fn cycle_tuple(n: usize) -> PermTuple {
        let swap = Permutation::from_cycles(n, &[&[0, 1]]).unwrap();
        PermTuple::new(vec![Permutation::standard_cycle(n), swap]).unwrap()
    }

    #[test]
    fn parse_collapses_runs() {
        let t = cycle_tuple(8);
        let base = LambdaBase::new(&t, 0).unwrap();
        let w = Word::new(vec![Letter::plus(0); 5]);
        let lw = parse_lambda_word(&w, &base, 0).unwrap();
        assert_eq!(lw.segments(), &[Segment { exponent: 5, sign: Sign::Plus, separator: None }]);

        let w = Word::new(vec![Letter::plus(0), Letter::minus(0), Letter::plus(1)]);
        let lw = parse_lambda_word(&w, &base, 1).unwrap();
        assert_eq!(
            lw.segments(),
            &[
                Segment { exponent: 0, sign: Sign::Plus, separator: Some(Letter::plus(1)) },
                Segment { exponent: 0, sign: Sign::Plus, separator: None },
            ]
        );
        assert_eq!(lw.separator_count(), 1);
    }

    #[test]
    fn parse_reduces_modulo_order() {
        let t = cycle_tuple(5);
        let base = LambdaBase::new(&t, 0).unwrap();
        let w = Word::new(vec![Letter::minus(0); 7]);
        let lw = parse_lambda_word(&w, &base, 0).unwrap();
        assert_eq!(lw.segments(), &[Segment { exponent: 2, sign: Sign::Minus, separator: None }]);
    }

    #[test]
    fn parse_splits_runs_longer_than_n() {
        // a_0 = (0 1 2)(3 4 5 6), order 12 > n = 7
        let a0 = Permutation::from_cycles(7, &[&[0, 1, 2], &[3, 4, 5, 6]]).unwrap();
        let t = PermTuple::new(vec![a0, Permutation::standard_cycle(7)]).unwrap();
        let base = LambdaBase::new(&t, 0).unwrap();
        let w = Word::new(vec![Letter::plus(0); 11]);
        let lw = parse_lambda_word(&w, &base, 0).unwrap();
        assert!(lw.segments().iter().all(|s| s.exponent < 7));
        let all: Vec<usize> = (0..7).collect();
        let naive: Vec<usize> = all.iter().map(|&p| crate::digraph::walk_eval(&t, &w, p)).collect();
        assert_eq!(eval_lambda(&lw, &base, &t, &all), naive);
    }

    #[test]
    fn parse_enforces_separator_budget() {
        let t = cycle_tuple(6);
        let base = LambdaBase::new(&t, 0).unwrap();
        let w = Word::new(vec![Letter::plus(1), Letter::plus(0), Letter::plus(1)]);
        assert!(matches!(parse_lambda_word(&w, &base, 1), Err(Error::Contract(_))));
        assert!(parse_lambda_word(&w, &base, 2).is_ok());
    }

    #[test]
    fn eval_lambda_trivial_cases() {
        let t = cycle_tuple(6);
        let base = LambdaBase::new(&t, 0).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let lw = parse_lambda_word(&Word::default(), &base, 0).unwrap();
        assert_eq!(eval_lambda(&lw, &base, &t, &all), all);
        let lw = parse_lambda_word(&Word::new(vec![Letter::plus(0)]), &base, 0).unwrap();
        assert_eq!(eval_lambda(&lw, &base, &t, &all), vec![1, 2, 3, 4, 5, 0]);
    }

    #[test]
    fn evaluators_agree_on_random_lambda_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 64;
        let perms: Vec<Permutation> = (0..3).map(|_| random_perm(n, &mut rng)).collect();
        let t = PermTuple::new(perms).unwrap();
        let base = LambdaBase::new(&t, 1).unwrap();
        let all: Vec<usize> = (0..n).collect();
        for _ in 0..50 {
            let mut letters = Vec::new();
            for _ in 0..rng.gen_range(0..5) {
                let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                letters.extend(std::iter::repeat_n(Letter { color: 1, sign }, rng.gen_range(0..n)));
                let color = if rng.gen_bool(0.5) { 0 } else { 2 };
                letters.push(Letter { color, sign: if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus } });
            }
            let w = Word::new(letters);
            let naive = Evaluator::Naive.images(&t, &w, &all).unwrap();
            let reduced = Evaluator::Reduced.images(&t, &w, &all).unwrap();
            let lambda = Evaluator::PowerTable { base: &base, max_separators: usize::MAX }
                .images(&t, &w, &all)
                .unwrap();
            assert_eq!(naive, reduced);
            assert_eq!(naive, lambda);
        }
    }
}
