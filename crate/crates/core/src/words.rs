//! Words over a graded alphabet `{a, b_1, ..., b_m}`.
//!
//! The letter `a` weighs 1 and `b_i` weighs `z_i + 1`. A word's weight is the
//! sum of its letter weights. `Γ_{p,k}` is the set of words of weight `p`
//! with exactly `k_i` copies of `b_i`; `Γ^{(r)}_{p,k}` keeps those that have a
//! prefix of weight `r` (the empty prefix has weight 0).
//!
//! Text format: space-separated tokens `a` and `b<i>` with `i` counted from 1,
//! e.g. `"a b2 a b1"`. The empty word renders as the empty string. When
//! `m = 1` the bare token `b` is also accepted on input.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{multinomial, MultiIndex, Scalar};
use crate::error::{Error, Result};

/// A letter. `B(i)` is `b_i` with `i` counted from 1.
///
/// The derived order is the canonical one: `a < b_1 < ... < b_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A => f.write_str("a"),
            Letter::B(i) => write!(f, "b{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedAlphabet {
    z: MultiIndex,
}

impl GradedAlphabet {
    /// Grading `z`; entries must be nonnegative. `z_i = 0` is allowed and gives
    /// a weight-1 letter distinct from `a`.
    pub fn new(z: MultiIndex) -> Result<Self> {
        z.require_natural("grading z")?;
        Ok(GradedAlphabet { z })
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn grading(&self) -> &MultiIndex {
        &self.z
    }

    pub fn weight_of(&self, letter: Letter) -> i64 {
        match letter {
            Letter::A => 1,
            Letter::B(i) => self.z.get(i) + 1,
        }
    }

    /// Letters in canonical order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        std::iter::once(Letter::A).chain((1..=self.dim()).map(Letter::B))
    }

    /// Fails unless every `z_i >= 1`.
    pub fn require_positive_grading(&self, operation: &str) -> Result<()> {
        if self.z.entries().iter().all(|&e| e >= 1) {
            Ok(())
        } else {
            Err(Error::precondition(format!(
                "{operation} requires every z_i >= 1 (z = {})",
                self.z
            )))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses the text format, checking letter indices against `alphabet`.
    pub fn parse(s: &str, alphabet: &GradedAlphabet) -> Result<Self> {
        let m = alphabet.dim();
        let letters = s
            .split_whitespace()
            .map(|tok| match tok {
                "a" => Ok(Letter::A),
                "b" if m == 1 => Ok(Letter::B(1)),
                _ => {
                    let i = tok
                        .strip_prefix('b')
                        .and_then(|rest| rest.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad letter {tok:?}")))?;
                    if (1..=m).contains(&i) {
                        Ok(Letter::B(i))
                    } else {
                        Err(Error::Parse(format!("letter {tok:?} outside b1..b{m}")))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Length `|w|`, the number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `||w||`.
    pub fn weight(&self, alphabet: &GradedAlphabet) -> i64 {
        self.0.iter().map(|&l| alphabet.weight_of(l)).sum()
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `(|w|_{b_1}, ..., |w|_{b_m})`.
    pub fn letter_counts(&self, alphabet: &GradedAlphabet) -> MultiIndex {
        let mut counts = vec![0; alphabet.dim()];
        for l in &self.0 {
            if let Letter::B(i) = l {
                counts[i - 1] += 1;
            }
        }
        MultiIndex::new(counts).expect("alphabet dimension is positive")
    }

    /// Weights of the nonempty prefixes, strictly increasing.
    pub fn prefix_weights(&self, alphabet: &GradedAlphabet) -> Vec<i64> {
        self.0
            .iter()
            .scan(0, |acc, &l| {
                *acc += alphabet.weight_of(l);
                Some(*acc)
            })
            .collect()
    }

    /// Length of the prefix of weight `r`, if there is one. The empty prefix
    /// has weight 0.
    pub fn prefix_len_of_weight(&self, r: i64, alphabet: &GradedAlphabet) -> Option<usize> {
        if r == 0 {
            return Some(0);
        }
        let mut acc = 0;
        for (idx, &l) in self.0.iter().enumerate() {
            acc += alphabet.weight_of(l);
            if acc == r {
                return Some(idx + 1);
            }
            if acc > r {
                return None;
            }
        }
        None
    }

    pub fn has_prefix_of_weight(&self, r: i64, alphabet: &GradedAlphabet) -> bool {
        self.prefix_len_of_weight(r, alphabet).is_some()
    }

    /// Splits after the first `len` letters.
    pub fn split_at(&self, len: usize) -> (Word, Word) {
        let (u, v) = self.0.split_at(len);
        (Word(u.to_vec()), Word(v.to_vec()))
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Whether the word lies in the class described by `spec`.
    pub fn is_member(&self, spec: &WordClassSpec, alphabet: &GradedAlphabet) -> bool {
        self.weight(alphabet) == spec.p
            && self.letter_counts(alphabet) == spec.k
            && spec.r.is_none_or(|r| self.has_prefix_of_weight(r, alphabet))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, l) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Serialized in the text format.
impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.split_whitespace()
            .map(|tok| match tok {
                "a" => Ok(Letter::A),
                _ => tok
                    .strip_prefix('b')
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .map(Letter::B)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad letter {tok:?}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// `Γ_{p,k}`, or `Γ^{(r)}_{p,k}` when `r` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordClassSpec {
    pub p: i64,
    pub k: MultiIndex,
    pub r: Option<i64>,
}

impl WordClassSpec {
    pub fn new(p: i64, k: MultiIndex) -> Self {
        WordClassSpec { p, k, r: None }
    }

    pub fn with_prefix(p: i64, k: MultiIndex, r: i64) -> Self {
        WordClassSpec { p, k, r: Some(r) }
    }
}

/// Streams the class in lexicographic order.
///
/// Infeasible specs (negative weight, negative counts, not enough weight for
/// the requested `b`s) give an empty stream. The only error is a dimension
/// mismatch between `spec.k` and the alphabet.
pub fn enumerate_words(spec: &WordClassSpec, alphabet: &GradedAlphabet) -> Result<WordStream> {
    spec.k.require_dim(alphabet.grading())?;
    Ok(WordStream::new(spec, alphabet))
}

/// Depth-first generator over one word class.
///
/// Holds only the word under construction, so memory is linear in the word
/// length. No word of a class is a proper prefix of another (they all have
/// the same weight), so depth-first order with letters tried in canonical
/// order is lexicographic order.
#[derive(Debug, Clone)]
pub struct WordStream {
    // weights[0] is `a`, weights[i] is `b_i`
    weights: Vec<i64>,
    target: i64,
    r: Option<i64>,
    path: Vec<usize>,
    weight: i64,
    remaining: Vec<i64>,
    // Σ remaining_i (z_i + 1): weight still owed to unplaced b's
    reserve: i64,
    state: StreamState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StreamState {
    Start,
    Running,
    Done,
}

impl WordStream {
    fn new(spec: &WordClassSpec, alphabet: &GradedAlphabet) -> Self {
        let weights: Vec<i64> = alphabet.letters().map(|l| alphabet.weight_of(l)).collect();
        let remaining = spec.k.entries().to_vec();
        let reserve = remaining.iter().zip(&weights[1..]).map(|(c, w)| c * w).sum();
        let feasible = spec.p >= 0
            && spec.k.is_natural()
            && spec.p >= reserve
            && spec.r.is_none_or(|r| (0..=spec.p).contains(&r));
        WordStream {
            weights,
            target: spec.p,
            r: spec.r,
            path: Vec::new(),
            weight: 0,
            remaining,
            reserve,
            state: if feasible { StreamState::Start } else { StreamState::Done },
        }
    }

    fn can_place(&self, code: usize) -> bool {
        let next = self.weight + self.weights[code];
        if next > self.target {
            return false;
        }
        let reserve = if code > 0 {
            if self.remaining[code - 1] == 0 {
                return false;
            }
            self.reserve - self.weights[code]
        } else {
            self.reserve
        };
        if self.target - next < reserve {
            return false;
        }
        // never jump over the required prefix weight
        !matches!(self.r, Some(r) if self.weight < r && next > r)
    }

    fn place(&mut self, code: usize) {
        self.weight += self.weights[code];
        if code > 0 {
            self.remaining[code - 1] -= 1;
            self.reserve -= self.weights[code];
        }
        self.path.push(code);
    }

    fn unplace(&mut self) -> Option<usize> {
        let code = self.path.pop()?;
        self.weight -= self.weights[code];
        if code > 0 {
            self.remaining[code - 1] += 1;
            self.reserve += self.weights[code];
        }
        Some(code)
    }

    /// Extends greedily with the smallest placeable letter. True when a
    /// complete word was reached, false at a dead end.
    fn descend(&mut self) -> bool {
        while self.weight < self.target {
            match (0..self.weights.len()).find(|&c| self.can_place(c)) {
                Some(c) => self.place(c),
                None => return false,
            }
        }
        true
    }

    fn current(&self) -> Word {
        Word(
            self.path
                .iter()
                .map(|&c| if c == 0 { Letter::A } else { Letter::B(c) })
                .collect(),
        )
    }

    /// Backtracks to the next sibling and descends, repeating past dead ends.
    fn advance(&mut self) -> bool {
        loop {
            let Some(last) = self.unplace() else {
                return false;
            };
            if let Some(c) = (last + 1..self.weights.len()).find(|&c| self.can_place(c)) {
                self.place(c);
                if self.descend() {
                    return true;
                }
            }
        }
    }
}

impl Iterator for WordStream {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let found = match self.state {
            StreamState::Done => return None,
            StreamState::Start => {
                self.state = StreamState::Running;
                self.descend() || self.advance()
            }
            StreamState::Running => self.advance(),
        };
        if found {
            Some(self.current())
        } else {
            self.state = StreamState::Done;
            None
        }
    }
}

/// Closed-form `#Γ_{p,k}`: `C(p - k·z, k)` on the feasible range, and 0 when
/// the class is empty (negative weight or counts, or `p - k·z < |k|`).
///
/// Outside the feasible range the raw multinomial need not vanish (its
/// argument can be negative), so infeasibility is checked first.
pub fn count_words(p: i64, k: &MultiIndex, alphabet: &GradedAlphabet) -> Result<Scalar> {
    let kz = k.dot(alphabet.grading())?;
    if p < 0 || !k.is_natural() || p - kz < k.norm() {
        return Ok(Scalar::default());
    }
    Ok(multinomial(&crate::arith::int(p - kz), k))
}

/// `#Γ^{(p)}_{p+q,n}` as the convolution
/// `Σ_k C(p - k·z, k) C(q - (n-k)·z, n-k)`; requires `p, q >= n·z`.
pub fn count_prefix_class(
    p: i64,
    q: i64,
    n: &MultiIndex,
    alphabet: &GradedAlphabet,
) -> Result<Scalar> {
    let z = alphabet.grading();
    let nz = n.dot(z)?;
    n.require_natural("n")?;
    if p < nz || q < nz {
        return Err(Error::precondition(format!(
            "prefix-class count requires p >= n·z and q >= n·z (p = {p}, q = {q}, n·z = {nz})"
        )));
    }
    let mut total = Scalar::default();
    for k in n.box_iter() {
        let rest = n.sub(&k)?;
        let left = multinomial(&crate::arith::int(p - k.dot(z)?), &k);
        let right = multinomial(&crate::arith::int(q - rest.dot(z)?), &rest);
        total += left * right;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn alpha(z: &[i64]) -> GradedAlphabet {
        GradedAlphabet::new(MultiIndex::new(z.to_vec()).unwrap()).unwrap()
    }

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn w(s: &str, a: &GradedAlphabet) -> Word {
        Word::parse(s, a).unwrap()
    }

    fn listing(spec: WordClassSpec, a: &GradedAlphabet) -> Vec<String> {
        enumerate_words(&spec, a).unwrap().map(|w| w.to_string()).collect()
    }

    #[test]
    fn weight_examples() {
        let a = alpha(&[1]);
        assert_eq!(w("", &a).weight(&a), 0);
        assert_eq!(w("a b a", &a).weight(&a), 4);
        assert_eq!(w("b b", &a).weight(&a), 4);
    }

    #[test]
    fn reverse_examples() {
        let a = alpha(&[1, 2]);
        assert_eq!(w("a b1 b2", &a).reverse().to_string(), "b2 b1 a");
        assert_eq!(w("", &a).reverse(), Word::empty());
        let x = w("b2 a a b1", &a);
        assert_eq!(x.reverse().reverse(), x);
    }

    #[test]
    fn letter_count_examples() {
        let a = alpha(&[1, 2]);
        assert_eq!(w("a b2 a b2", &a).letter_counts(&a), mi(&[0, 2]));
        assert_eq!(w("", &a).letter_counts(&a), mi(&[0, 0]));
        assert_eq!(w("b1 b2 b1", &a).letter_counts(&a), mi(&[2, 1]));
    }

    #[test]
    fn parse_rejects_unknown_letters() {
        let a = alpha(&[1]);
        assert!(Word::parse("a b2", &a).is_err());
        assert!(Word::parse("c", &a).is_err());
        assert!(Word::parse("b0", &a).is_err());
        assert_eq!(Word::parse("  a   b1 ", &a).unwrap().to_string(), "a b1");
    }

    #[test]
    fn enumeration_examples() {
        let a = alpha(&[1]);
        assert_eq!(listing(WordClassSpec::new(3, mi(&[1])), &a), ["a b1", "b1 a"]);
        assert_eq!(listing(WordClassSpec::new(0, mi(&[0])), &a), [""]);
        assert_eq!(listing(WordClassSpec::with_prefix(3, mi(&[1]), 1), &a), ["a b1"]);
    }

    #[test]
    fn infeasible_classes_are_empty() {
        let a = alpha(&[2, 3]);
        assert!(listing(WordClassSpec::new(4, mi(&[1, 1])), &a).is_empty());
        assert!(listing(WordClassSpec::new(-1, mi(&[0, 0])), &a).is_empty());
        assert!(listing(WordClassSpec::new(5, mi(&[-1, 0])), &a).is_empty());
        assert!(listing(WordClassSpec::with_prefix(3, mi(&[0, 0]), 4), &a).is_empty());
        assert_eq!(count_words(4, &mi(&[1, 1]), &a).unwrap(), int(0));
        assert!(enumerate_words(&WordClassSpec::new(3, mi(&[1])), &a).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_words(3, &mi(&[1]), &alpha(&[1])).unwrap(), int(2));
        assert_eq!(count_words(5, &mi(&[0]), &alpha(&[1])).unwrap(), int(1));
        let a = alpha(&[1, 2]);
        assert_eq!(count_words(4, &mi(&[1, 0]), &a).unwrap(), int(3));
        assert_eq!(
            listing(WordClassSpec::new(4, mi(&[1, 0])), &a),
            ["a a b1", "a b1 a", "b1 a a"]
        );
    }

    #[test]
    fn prefix_weight_examples() {
        assert_eq!(w("a b1", &alpha(&[1])).prefix_weights(&alpha(&[1])), [1, 3]);
        assert!(Word::empty().prefix_weights(&alpha(&[1])).is_empty());
        let a = alpha(&[1, 2]);
        assert_eq!(w("b2 a", &a).prefix_weights(&a), [3, 4]);
    }

    #[test]
    fn prefix_class_count_examples() {
        let a = alpha(&[1]);
        assert_eq!(count_prefix_class(1, 2, &mi(&[1]), &a).unwrap(), int(1));
        assert_eq!(count_prefix_class(2, 2, &mi(&[0]), &a).unwrap(), int(1));
        assert_eq!(count_prefix_class(2, 2, &mi(&[1]), &a).unwrap(), int(2));
        assert_eq!(
            listing(WordClassSpec::with_prefix(4, mi(&[1]), 2), &a),
            ["a a b1", "b1 a a"]
        );
        assert!(matches!(
            count_prefix_class(0, 2, &mi(&[1]), &a),
            Err(Error::Precondition(_))
        ));
    }

    /// Brute force: every letter sequence of the right length, filtered.
    fn brute_force(spec: &WordClassSpec, a: &GradedAlphabet) -> Vec<Word> {
        let letters: Vec<Letter> = a.letters().collect();
        let len = spec.p - spec.k.dot(a.grading()).unwrap();
        if len < 0 {
            return Vec::new();
        }
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut n = w.clone();
                        n.push(l);
                        n
                    })
                })
                .collect();
        }
        out.retain(|w| w.is_member(spec, a));
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for z in [vec![0], vec![1], vec![2], vec![1, 2], vec![0, 1], vec![2, 1]] {
            let a = alpha(&z);
            let bound = MultiIndex::new(vec![3; z.len()]).unwrap();
            for k in bound.box_iter().filter(|k| k.norm() <= 3) {
                for p in 0..=8 {
                    for r in [None, Some(0), Some(1), Some(2), Some(3), Some(p)] {
                        let spec = WordClassSpec { p, k: k.clone(), r };
                        let got: Vec<Word> = enumerate_words(&spec, &a).unwrap().collect();
                        assert_eq!(got, brute_force(&spec, &a), "z={z:?} {spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_class_with_full_weight_is_whole_class() {
        let a = alpha(&[1, 2]);
        for k in mi(&[2, 2]).box_iter() {
            for p in 0..=10 {
                let whole: Vec<Word> = enumerate_words(&WordClassSpec::new(p, k.clone()), &a)
                    .unwrap()
                    .collect();
                let prefixed: Vec<Word> =
                    enumerate_words(&WordClassSpec::with_prefix(p, k.clone(), p), &a)
                        .unwrap()
                        .collect();
                assert_eq!(whole, prefixed);
            }
        }
    }
}
