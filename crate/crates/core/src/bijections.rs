//! The weight-shift bijection `Γ^{(p)}_{W,n} → Γ^{(p+1)}_{W,n}` (with
//! `W = p + q + n·z`), its inverse and r-fold iterate, and the factorization
//! of a word at the first prefix of weight at least `p`.
//!
//! All searches below intersect strictly increasing weight sequences (every
//! letter weighs at least 1), so each minimal pair is unique and found by a
//! two-cursor scan.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{int, MultiIndex};
use crate::error::{Error, Result};
use crate::report::{Counterexample, EvalReport, Verdict};
use crate::words::{
    count_prefix_class, count_words, enumerate_words, GradedAlphabet, Letter, Word, WordClassSpec,
};

/// `(weight, length)` for every prefix of `w`, shortest first.
fn prefix_profile(w: &Word, alphabet: &GradedAlphabet, with_empty: bool) -> Vec<(i64, usize)> {
    let start = if with_empty { Some((0, 0)) } else { None };
    start
        .into_iter()
        .chain(w.prefix_weights(alphabet).into_iter().zip(1..))
        .collect()
}

/// `(weight, length)` for every suffix of `w`, shortest first.
fn suffix_profile(w: &Word, alphabet: &GradedAlphabet, with_empty: bool) -> Vec<(i64, usize)> {
    prefix_profile(&w.reverse(), alphabet, with_empty)
}

/// First pair with `a.weight + offset == b.weight`; both inputs strictly
/// increasing in weight. Returns the two lengths.
fn first_offset_match(a: &[(i64, usize)], b: &[(i64, usize)], offset: i64) -> Option<(usize, usize)> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match (a[i].0 + offset).cmp(&b[j].0) {
            std::cmp::Ordering::Equal => return Some((a[i].1, b[j].1)),
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    None
}

/// Shortest nonempty prefixes `x` of `u` and `y` of `v` with equal weight.
///
/// Requires `||u||, ||v|| >= n·z + 1` where `n` is the letter-count vector of
/// `u·v`. Such a pair always exists under that bound; failing to find one is
/// reported as [`Error::NoBalancedPair`].
pub fn find_equal_prefixes(
    u: &Word,
    v: &Word,
    n: &MultiIndex,
    alphabet: &GradedAlphabet,
) -> Result<(Word, Word)> {
    let nz = n.dot(alphabet.grading())?;
    let counts = Word::concat(&[u, v]).letter_counts(alphabet);
    if &counts != n {
        return Err(Error::precondition(format!(
            "n must equal the letter counts of u·v (n = {n}, counts = {counts})"
        )));
    }
    let (wu, wv) = (u.weight(alphabet), v.weight(alphabet));
    if wu < nz + 1 || wv < nz + 1 {
        return Err(Error::precondition(format!(
            "equal-prefix search requires ||u||, ||v|| >= n·z + 1 (||u|| = {wu}, ||v|| = {wv}, n·z = {nz})"
        )));
    }
    let (xl, yl) = first_offset_match(
        &prefix_profile(u, alphabet, false),
        &prefix_profile(v, alphabet, false),
        0,
    )
    .ok_or_else(|| Error::NoBalancedPair { u: u.to_string(), v: v.to_string() })?;
    Ok((u.split_at(xl).0, v.split_at(yl).0))
}

/// The minimal suffix `x` of `u` (possibly empty) and prefix `y` of `v`
/// (nonempty) with `||x|| = ||y|| - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedPair {
    pub x: Word,
    pub y: Word,
    /// `u = u[..u_cut] · x`
    pub u_cut: usize,
    /// `v = y · v[v_cut..]`
    pub v_cut: usize,
}

pub fn find_balanced_pair(u: &Word, v: &Word, alphabet: &GradedAlphabet) -> Result<BalancedPair> {
    let (xl, yl) = first_offset_match(
        &suffix_profile(u, alphabet, true),
        &prefix_profile(v, alphabet, false),
        1,
    )
    .ok_or_else(|| Error::NoBalancedPair { u: u.to_string(), v: v.to_string() })?;
    let u_cut = u.len() - xl;
    Ok(BalancedPair { x: u.split_at(u_cut).1, y: v.split_at(yl).0, u_cut, v_cut: yl })
}

/// Checks the shift preconditions and splits `w` after its prefix of weight
/// `cut`. Returns `(n, q, head, tail)`.
fn split_for_shift(
    w: &Word,
    p: i64,
    cut: i64,
    alphabet: &GradedAlphabet,
) -> Result<(MultiIndex, i64, Word, Word)> {
    let n = w.letter_counts(alphabet);
    let nz = n.dot(alphabet.grading())?;
    if p < nz {
        return Err(Error::precondition(format!(
            "weight shift requires p >= n·z (p = {p}, n·z = {nz})"
        )));
    }
    let q = w.weight(alphabet) - p - nz;
    if q < 1 {
        return Err(Error::precondition(format!(
            "weight shift requires q >= 1 where q = ||w|| - p - n·z (q = {q})"
        )));
    }
    let len = w.prefix_len_of_weight(cut, alphabet).ok_or_else(|| {
        Error::precondition(format!("word \"{w}\" has no prefix of weight {cut}"))
    })?;
    let (head, tail) = w.split_at(len);
    Ok((n, q, head, tail))
}

/// Sends `w ∈ Γ^{(p)}` to `Γ^{(p+1)}`: split `w = u·v` at weight `p`, take the
/// balanced pair `u = u'·x`, `v = y·v'`, and return `u'·rev(y)·rev(x)·v'`.
pub fn shift_up(w: &Word, p: i64, alphabet: &GradedAlphabet) -> Result<Word> {
    let (_, _, u, v) = split_for_shift(w, p, p, alphabet)?;
    let pair = find_balanced_pair(&u, &v, alphabet)?;
    let (u_head, _) = u.split_at(pair.u_cut);
    let (_, v_tail) = v.split_at(pair.v_cut);
    Ok(Word::concat(&[&u_head, &pair.y.reverse(), &pair.x.reverse(), &v_tail]))
}

/// Inverse of [`shift_up`]: split at weight `p + 1` into `U·V`, take the
/// minimal nonempty suffix `Y` of `U` and prefix `X` of `V` (possibly empty)
/// with `||Y|| = ||X|| + 1`, and swap them back reversed.
pub fn shift_down(w: &Word, p: i64, alphabet: &GradedAlphabet) -> Result<Word> {
    let (_, _, u, v) = split_for_shift(w, p, p + 1, alphabet)?;
    let (xl, yl) = first_offset_match(
        &prefix_profile(&v, alphabet, true),
        &suffix_profile(&u, alphabet, false),
        1,
    )
    .ok_or_else(|| Error::NoBalancedPair { u: u.to_string(), v: v.to_string() })?;
    let (u_head, y) = u.split_at(u.len() - yl);
    let (x, v_tail) = v.split_at(xl);
    Ok(Word::concat(&[&u_head, &x.reverse(), &y.reverse(), &v_tail]))
}

fn check_shift_steps(w: &Word, p: i64, r: i64, alphabet: &GradedAlphabet) -> Result<()> {
    if r < 1 {
        return Err(Error::precondition(format!("r-fold shift requires r >= 1 (r = {r})")));
    }
    let nz = w.letter_counts(alphabet).dot(alphabet.grading())?;
    let q = w.weight(alphabet) - p - nz;
    if q < r {
        return Err(Error::precondition(format!(
            "r-fold shift requires q >= r where q = ||w|| - p - n·z (q = {q}, r = {r})"
        )));
    }
    Ok(())
}

/// `Γ^{(p)} → Γ^{(p+r)}` as the composition of `r` unit shifts.
pub fn shift_by(w: &Word, p: i64, r: i64, alphabet: &GradedAlphabet) -> Result<Word> {
    check_shift_steps(w, p, r, alphabet)?;
    (0..r).try_fold(w.clone(), |acc, s| shift_up(&acc, p + s, alphabet))
}

/// Inverse of [`shift_by`]; `w` is in `Γ^{(p+r)}`.
pub fn shift_down_by(w: &Word, p: i64, r: i64, alphabet: &GradedAlphabet) -> Result<Word> {
    check_shift_steps(w, p, r, alphabet)?;
    (0..r).rev().try_fold(w.clone(), |acc, s| shift_down(&acc, p + s, alphabet))
}

/// Factorization `w = u·v` with `||u|| >= p` minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RaneyFactorization {
    /// `||u|| = p`.
    Prefix { u: Word, v: Word },
    /// `u = u'·b_i` with `||u|| = p + j`, `1 <= j <= z_i`.
    Overshoot { i: usize, j: i64, u_prime: Word, v: Word },
}

fn check_factorization_preconditions(
    n: &MultiIndex,
    weight: i64,
    p: i64,
    alphabet: &GradedAlphabet,
) -> Result<()> {
    alphabet.require_positive_grading("factorization")?;
    let nz = n.dot(alphabet.grading())?;
    if p < nz {
        return Err(Error::precondition(format!(
            "factorization requires p >= n·z (p = {p}, n·z = {nz})"
        )));
    }
    let q = weight - p - nz;
    if q < 1 {
        return Err(Error::precondition(format!(
            "factorization requires q >= 1 where q = ||w|| - p - n·z (q = {q})"
        )));
    }
    Ok(())
}

pub fn raney_factorize(w: &Word, p: i64, alphabet: &GradedAlphabet) -> Result<RaneyFactorization> {
    check_factorization_preconditions(&w.letter_counts(alphabet), w.weight(alphabet), p, alphabet)?;
    let profile = prefix_profile(w, alphabet, true);
    let &(wu, len) = profile
        .iter()
        .find(|(wt, _)| *wt >= p)
        .ok_or_else(|| Error::Internal(format!("no prefix of weight >= {p} in \"{w}\"")))?;
    let (u, v) = w.split_at(len);
    if wu == p {
        return Ok(RaneyFactorization::Prefix { u, v });
    }
    // the letter that crossed p must be heavier than the overshoot
    match u.letters().last() {
        Some(&Letter::B(i)) => {
            let j = wu - p;
            debug_assert!(j >= 1 && j <= alphabet.grading().get(i));
            Ok(RaneyFactorization::Overshoot { i, j, u_prime: u.split_at(len - 1).0, v })
        }
        _ => Err(Error::Internal(format!("overshooting prefix of \"{w}\" does not end in a b-letter"))),
    }
}

pub fn raney_unfactorize(
    f: &RaneyFactorization,
    p: i64,
    alphabet: &GradedAlphabet,
) -> Result<Word> {
    match f {
        RaneyFactorization::Prefix { u, v } => {
            let wu = u.weight(alphabet);
            if wu != p {
                return Err(Error::InconsistentFactorization(format!(
                    "prefix part has weight {wu}, expected {p}"
                )));
            }
            Ok(Word::concat(&[u, v]))
        }
        RaneyFactorization::Overshoot { i, j, u_prime, v } => {
            let m = alphabet.dim();
            if !(1..=m).contains(i) {
                return Err(Error::InconsistentFactorization(format!("letter b{i} outside b1..b{m}")));
            }
            let zi = alphabet.grading().get(*i);
            if !(1..=zi).contains(j) {
                return Err(Error::InconsistentFactorization(format!(
                    "overshoot j = {j} outside 1..=z_{i} = {zi}"
                )));
            }
            let wu = u_prime.weight(alphabet);
            if wu != p + j - zi - 1 {
                return Err(Error::InconsistentFactorization(format!(
                    "u' has weight {wu}, expected p + j - z_i - 1 = {}",
                    p + j - zi - 1
                )));
            }
            let mut u = u_prime.clone();
            u.push(Letter::B(*i));
            Ok(Word::concat(&[&u, v]))
        }
    }
}

fn enumerated_count(p: i64, k: &MultiIndex, alphabet: &GradedAlphabet) -> Result<usize> {
    Ok(enumerate_words(&WordClassSpec::new(p, k.clone()), alphabet)?.count())
}

fn check_class_parameters(p: i64, q: i64, n: &MultiIndex, alphabet: &GradedAlphabet) -> Result<i64> {
    n.require_natural("n")?;
    let nz = n.dot(alphabet.grading())?;
    if p < nz {
        return Err(Error::precondition(format!("requires p >= n·z (p = {p}, n·z = {nz})")));
    }
    if q < 1 {
        return Err(Error::precondition(format!("requires q >= 1 (q = {q})")));
    }
    Ok(nz)
}

/// Applies the r-fold shift to every word of `Γ^{(p)}_{p+q+n·z,n}` and checks
/// that it lands in `Γ^{(p+r)}`, is injective and onto, and that
/// [`shift_down_by`] undoes it word for word.
pub fn verify_shift_class(
    p: i64,
    q: i64,
    n: &MultiIndex,
    r: i64,
    alphabet: &GradedAlphabet,
) -> Result<EvalReport> {
    let nz = check_class_parameters(p, q, n, alphabet)?;
    if r < 1 || r > q {
        return Err(Error::precondition(format!("requires q >= r >= 1 (q = {q}, r = {r})")));
    }
    let total = p + q + nz;
    let source = WordClassSpec::with_prefix(total, n.clone(), p);
    let target: BTreeSet<Word> =
        enumerate_words(&WordClassSpec::with_prefix(total, n.clone(), p + r), alphabet)?.collect();

    let mut image = BTreeSet::new();
    let mut class_size = 0usize;
    let mut round_trips = 0usize;
    let mut failure: Option<Counterexample> = None;
    for w in enumerate_words(&source, alphabet)? {
        class_size += 1;
        let img = shift_by(&w, p, r, alphabet)?;
        let problem = if !target.contains(&img) {
            Some("image outside the target class")
        } else if !image.insert(img.clone()) {
            Some("two words share an image")
        } else if shift_down_by(&img, p, r, alphabet)? != w {
            Some("inverse does not recover the word")
        } else {
            round_trips += 1;
            None
        };
        if let (Some(msg), None) = (problem, &failure) {
            failure = Some(Counterexample::new(msg).at("word", &w).at("image", &img));
        }
    }
    let onto = image == target;
    let ok = failure.is_none() && onto && class_size == target.len();
    let mut report = EvalReport::new("shift", Verdict::pass_if(ok))
        .param("p", p)
        .param("q", q)
        .param("n", n)
        .param("r", r)
        .param("z", alphabet.grading())
        .detail("class_size", class_size)
        .detail("target_size", target.len())
        .detail("image_size", image.len())
        .detail("round_trips", round_trips)
        .detail("onto", onto);
    if failure.is_none() && !onto {
        failure = Some(Counterexample::new("image misses part of the target class"));
    }
    report.counterexample = failure;
    Ok(report)
}

/// Factorizes every word of `Γ_{p+q+n·z,n}` and checks the case tallies
/// against the disjoint-union decomposition
///
/// `#Γ = #Γ^{(p)} + Σ_i Σ_{j=1}^{z_i} Σ_k #Γ_{p+j-z_i-1, k-e_i} · #Γ_{q+n·z-j, n-k}`,
///
/// with every cardinality taken both by enumeration and in closed form, and
/// that every factorization reassembles to its word.
pub fn verify_raney_decomposition(
    p: i64,
    q: i64,
    n: &MultiIndex,
    alphabet: &GradedAlphabet,
) -> Result<EvalReport> {
    alphabet.require_positive_grading("factorization")?;
    let nz = check_class_parameters(p, q, n, alphabet)?;
    let z = alphabet.grading();
    let m = alphabet.dim();
    let total_weight = p + q + nz;

    let mut total = 0usize;
    let mut prefix_case = 0usize;
    let mut overshoot: BTreeMap<(usize, i64, MultiIndex), usize> = BTreeMap::new();
    let mut failure: Option<Counterexample> = None;
    for w in enumerate_words(&WordClassSpec::new(total_weight, n.clone()), alphabet)? {
        total += 1;
        let f = raney_factorize(&w, p, alphabet)?;
        if raney_unfactorize(&f, p, alphabet)? != w && failure.is_none() {
            failure = Some(Counterexample::new("reassembly differs from the word").at("word", &w));
        }
        match f {
            RaneyFactorization::Prefix { .. } => prefix_case += 1,
            RaneyFactorization::Overshoot { i, j, u_prime, .. } => {
                let k = u_prime.letter_counts(alphabet).add(&MultiIndex::unit(m, i))?;
                *overshoot.entry((i, j, k)).or_default() += 1;
            }
        }
    }

    let mut mismatches = Vec::new();
    let total_closed = count_words(total_weight, n, alphabet)?;
    if int(total as i64) != total_closed {
        mismatches.push(format!("class size {total} vs closed form {total_closed}"));
    }
    let prefix_enum =
        enumerate_words(&WordClassSpec::with_prefix(total_weight, n.clone(), p), alphabet)?.count();
    let prefix_closed = count_prefix_class(p, q + nz, n, alphabet)?;
    if prefix_case != prefix_enum || int(prefix_enum as i64) != prefix_closed {
        mismatches.push(format!(
            "prefix case {prefix_case}, enumerated {prefix_enum}, closed form {prefix_closed}"
        ));
    }

    let mut decomposition_sum = int(prefix_case as i64);
    for i in 1..=m {
        let zi = z.get(i);
        let e_i = MultiIndex::unit(m, i);
        for j in 1..=zi {
            for k in n.box_iter() {
                let head_k = k.sub(&e_i)?;
                let tail_k = n.sub(&k)?;
                let (head_w, tail_w) = (p + j - zi - 1, q + nz - j);
                let closed =
                    count_words(head_w, &head_k, alphabet)? * count_words(tail_w, &tail_k, alphabet)?;
                let enumerated = if head_k.is_natural() {
                    enumerated_count(head_w, &head_k, alphabet)?
                        * enumerated_count(tail_w, &tail_k, alphabet)?
                } else {
                    0
                };
                let tallied = overshoot.get(&(i, j, k.clone())).copied().unwrap_or(0);
                if tallied != enumerated || int(enumerated as i64) != closed {
                    mismatches.push(format!(
                        "i={i} j={j} k={k}: tallied {tallied}, enumerated {enumerated}, closed form {closed}"
                    ));
                }
                decomposition_sum += closed;
            }
        }
    }
    if decomposition_sum != total_closed {
        mismatches.push(format!("decomposition sums to {decomposition_sum}, class has {total_closed}"));
    }
    if failure.is_none() {
        if let Some(first) = mismatches.first() {
            failure = Some(Counterexample::new(first.clone()));
        }
    }

    let overshoot_total: usize = overshoot.values().sum();
    let mut report = EvalReport::new("raney", Verdict::pass_if(failure.is_none()))
        .param("p", p)
        .param("q", q)
        .param("n", n)
        .param("z", z)
        .detail("total", total)
        .detail("prefix_case", prefix_case)
        .detail("overshoot", overshoot_total)
        .detail("decomposition_sum", decomposition_sum.to_string());
    report.left = Some(total_closed.to_string());
    report.right = Some(decomposition_sum.to_string());
    report.counterexample = failure;
    Ok(report)
}
