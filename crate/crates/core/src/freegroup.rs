//! Free groups, their group rings, and the Magnus embedding.
//!
//! Generators are indexed from zero; the CLI's `h` and `k` are generators 0
//! and 1. The Magnus embedding sends generator `i` to `1 + letter_i` in the
//! truncated series ring, extended linearly over the group ring. On top of it
//! sit the Fox strip decomposition `u = ε + Σ (∂_l u)·l`, the Fox derivatives
//! on the group ring, the bi-ordering induced by comparing first series
//! coefficients in graded word order, and a desk-scale injectivity sweep.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::ring::{BaseRingElement, RingSpec};
use crate::series::{laurent_embed, Alphabet, NcSeries, Word};
use crate::Error;

/// A freely reduced word in a free group: a sequence of syllables
/// `(generator index, nonzero exponent)` where adjacent syllables use
/// distinct generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    syllables: Vec<(usize, i64)>,
}

impl GroupWord {
    pub fn identity() -> GroupWord {
        GroupWord { syllables: Vec::new() }
    }

    pub fn generator(index: usize) -> GroupWord {
        GroupWord { syllables: alloc::vec![(index, 1)] }
    }

    /// Build a word from raw syllables, applying full free reduction.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, i64)>) -> GroupWord {
        let mut stack: Vec<(usize, i64)> = Vec::new();
        for (gen, exp) in syllables {
            if exp == 0 {
                continue;
            }
            match stack.last_mut() {
                Some((top_gen, top_exp)) if *top_gen == gen => {
                    *top_exp += exp;
                    if *top_exp == 0 {
                        stack.pop();
                    }
                }
                _ => stack.push((gen, exp)),
            }
        }
        GroupWord { syllables: stack }
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter length `Σ |exponent|`.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Smallest rank containing every generator used.
    pub fn rank_bound(&self) -> usize {
        self.syllables.iter().map(|(g, _)| g + 1).max().unwrap_or(0)
    }

    /// Concatenation followed by full free reduction.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        GroupWord::from_syllables(
            self.syllables.iter().chain(other.syllables.iter()).copied(),
        )
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            syllables: self.syllables.iter().rev().map(|(g, e)| (*g, -e)).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> GroupWord {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// The word as single letters `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().flat_map(|(g, e)| {
            let sign = e.signum();
            (0..e.unsigned_abs()).map(move |_| (*g, sign))
        })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (gen, exp) in &self.syllables {
            let letter = (b'a' + (*gen as u8 % 26)) as char;
            match exp {
                1 => write!(f, "{letter}")?,
                -1 => write!(f, "{}", letter.to_ascii_uppercase())?,
                e => write!(f, "{letter}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A finite formal sum of reduced group words with base-ring coefficients,
/// canonical: keys reduced, values nonzero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupRingElement {
    ring: RingSpec,
    terms: BTreeMap<GroupWord, BaseRingElement>,
}

impl GroupRingElement {
    pub fn zero(ring: &RingSpec) -> GroupRingElement {
        GroupRingElement { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingSpec) -> GroupRingElement {
        GroupRingElement::from_word(ring, GroupWord::identity())
    }

    pub fn from_word(ring: &RingSpec, word: GroupWord) -> GroupRingElement {
        GroupRingElement::zero(ring).with_added_term(&word, &BaseRingElement::one(ring))
    }

    pub fn from_terms(
        ring: &RingSpec,
        terms: impl IntoIterator<Item = (GroupWord, BaseRingElement)>,
    ) -> Result<GroupRingElement, Error> {
        let mut out = GroupRingElement::zero(ring);
        for (word, coeff) in terms {
            if coeff.ring() != ring {
                return Err(Error::RingMismatch);
            }
            out = out.with_added_term(&word, &coeff);
        }
        Ok(out)
    }

    /// Add `coeff · word`, keeping the term map normalized. Panics on a
    /// coefficient from a different ring.
    pub fn with_added_term(mut self, word: &GroupWord, coeff: &BaseRingElement) -> GroupRingElement {
        assert_eq!(coeff.ring(), &self.ring, "coefficient from a different ring");
        if coeff.is_zero() {
            return self;
        }
        let entry = self
            .terms
            .entry(word.clone())
            .or_insert_with(|| BaseRingElement::zero(&self.ring));
        *entry = entry.add_unchecked(coeff);
        if entry.is_zero() {
            self.terms.remove(word);
        }
        self
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, &BaseRingElement)> {
        self.terms.iter()
    }

    /// Largest rank needed by any word in the support.
    pub fn rank_bound(&self) -> usize {
        self.terms.keys().map(GroupWord::rank_bound).max().unwrap_or(0)
    }

    /// The augmentation `ε`: the sum of all coefficients.
    pub fn augmentation(&self) -> BaseRingElement {
        self.terms
            .values()
            .fold(BaseRingElement::zero(&self.ring), |acc, c| acc.add_unchecked(c))
    }

    fn check_same_ring(&self, other: &GroupRingElement) -> Result<(), Error> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &GroupRingElement) -> Result<GroupRingElement, Error> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out = out.with_added_term(w, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> GroupRingElement {
        GroupRingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &GroupRingElement) -> Result<GroupRingElement, Error> {
        self.add(&other.neg())
    }

    pub fn scale(&self, scalar: &BaseRingElement) -> Result<GroupRingElement, Error> {
        if scalar.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = GroupRingElement::zero(&self.ring);
        for (w, c) in &self.terms {
            out = out.with_added_term(w, &scalar.mul_unchecked(c));
        }
        Ok(out)
    }

    /// Group-ring product: convolution over freely reduced word products.
    pub fn mul(&self, other: &GroupRingElement) -> Result<GroupRingElement, Error> {
        self.check_same_ring(other)?;
        let mut out = GroupRingElement::zero(&self.ring);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out = out.with_added_term(&w1.mul(w2), &c1.mul_unchecked(c2));
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// the Magnus embedding

/// Truncated series image of a single group word under `g_i ↦ 1 + letter_i`.
fn magnus_word(
    ring: &RingSpec,
    alphabet: &Alphabet,
    word: &GroupWord,
    degree: usize,
) -> NcSeries {
    let mut out = NcSeries::one(ring, alphabet, degree);
    for (gen, exp) in word.syllables() {
        let letter = alphabet.letters()[*gen];
        let factor = laurent_embed(ring, letter, *exp, degree)
            .embed_into(alphabet)
            .expect("single letter embeds");
        out = out.mul(&factor).expect("same spec");
    }
    out
}

/// The Magnus embedding: the ring homomorphism determined by
/// `g_i ↦ 1 + letter_i` (inverses go to truncated geometric series),
/// extended linearly. The constant term of the image is the augmentation.
pub fn magnus(
    f: &GroupRingElement,
    alphabet: &Alphabet,
    degree: usize,
) -> Result<NcSeries, Error> {
    if f.rank_bound() > alphabet.len() {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = NcSeries::zero(f.ring(), alphabet, degree);
    for (word, coeff) in f.terms() {
        let image = magnus_word(f.ring(), alphabet, word, degree);
        out = out.add(&image.scale(coeff)?)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fox strip and Fox derivatives

/// The unique decomposition `u = ε + Σ_l (∂_l u) · l` of a series: `ε` is the
/// constant term and `∂_l u` collects the coefficients of words ending in the
/// letter `l`, with that trailing letter removed. The parts are returned in
/// alphabet order and have degree one less than `u` (saturating at zero).
pub fn fox_strip(u: &NcSeries) -> (BaseRingElement, Vec<NcSeries>) {
    let degree = u.degree().saturating_sub(1);
    let mut part_terms: Vec<Vec<(Word, BaseRingElement)>> =
        u.alphabet().letters().iter().map(|_| Vec::new()).collect();
    let mut constant = BaseRingElement::zero(u.ring());
    for (word, coeff) in u.terms() {
        match word.letters().split_last() {
            None => constant = coeff.clone(),
            Some((last, prefix)) => {
                let slot = u
                    .alphabet()
                    .letters()
                    .iter()
                    .position(|l| l == last)
                    .expect("letter from the series alphabet");
                part_terms[slot]
                    .push((Word::from_letters(prefix.iter().copied()), coeff.clone()));
            }
        }
    }
    let parts = part_terms
        .into_iter()
        .map(|terms| {
            NcSeries::from_terms(u.ring(), u.alphabet(), degree, terms)
                .expect("stripped terms are valid")
        })
        .collect();
    (constant, parts)
}

/// Fox derivative of a single ±1 letter with respect to `gen`.
fn fox_letter(ring: &RingSpec, letter: (usize, i64), gen: usize) -> GroupRingElement {
    let (g, sign) = letter;
    if g != gen {
        return GroupRingElement::zero(ring);
    }
    if sign > 0 {
        GroupRingElement::one(ring)
    } else {
        // D(g^{-1}) = -g^{-1}, from 0 = D(1) = D(g) + g·D(g^{-1})
        GroupRingElement::from_word(ring, GroupWord::from_syllables([(g, -1)])).neg()
    }
}

/// The Fox derivative `D_gen`: the coefficient-extraction operator with
/// `D(g) = 1` for the matching generator, `D(g') = 0` otherwise,
/// `D(g^{-1}) = -g^{-1}`, and the product rule `D(uv) = D(u) + u·D(v)`,
/// extended linearly. It satisfies `f = ε(f)·1 + Σ_g D_g(f)·(g - 1)`.
pub fn fox_derivative(f: &GroupRingElement, gen: usize) -> GroupRingElement {
    let ring = f.ring().clone();
    let mut out = GroupRingElement::zero(&ring);
    for (word, coeff) in f.terms() {
        let mut prefix = GroupWord::identity();
        let mut derivative = GroupRingElement::zero(&ring);
        for letter in word.letters() {
            let d = fox_letter(&ring, letter, gen);
            if !d.is_zero() {
                let shifted = GroupRingElement::from_word(&ring, prefix.clone())
                    .mul(&d)
                    .expect("same ring");
                derivative = derivative.add(&shifted).expect("same ring");
            }
            prefix = prefix.mul(&GroupWord::from_syllables([letter]));
        }
        out = out.add(&derivative.scale(coeff).expect("same ring")).expect("same ring");
    }
    out
}

// ---------------------------------------------------------------------------
// the induced ordering

/// Result of comparing two group words in the series-induced bi-ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Lt,
    Eq,
    Gt,
    /// The truncation schedule reached `cap` with a zero difference; logged
    /// as a finding, never silently retried.
    Undecided { cap: usize },
}

/// Compare two words via their Magnus expansions over the integers: the sign
/// of the coefficient of the graded-least word in the support of
/// `magnus(u) - magnus(v)` decides. Truncation degrees start at 1 and double
/// up to `cap`; the answer is schedule-independent because a truncation
/// shows every coefficient up to its degree exactly, so the graded-least
/// word of a nonzero truncated difference is the graded-least word of the
/// full difference.
pub fn order_compare(u: &GroupWord, v: &GroupWord, cap: usize) -> OrderResult {
    if u == v {
        return OrderResult::Eq;
    }
    let ring = RingSpec::Integers;
    let rank = u.rank_bound().max(v.rank_bound()).max(1);
    let alphabet = Alphabet::of_rank(rank).expect("small rank");
    let mut degree = 1usize;
    loop {
        let mu = magnus(&GroupRingElement::from_word(&ring, u.clone()), &alphabet, degree)
            .expect("rank fits");
        let mv = magnus(&GroupRingElement::from_word(&ring, v.clone()), &alphabet, degree)
            .expect("rank fits");
        let diff = mu.sub(&mv).expect("same spec");
        if let Some((_, coeff)) = diff.terms().next() {
            let value = coeff.integer_value().expect("integer coefficients");
            return if value.sign() == num_bigint::Sign::Plus {
                OrderResult::Gt
            } else {
                OrderResult::Lt
            };
        }
        if degree >= cap {
            return OrderResult::Undecided { cap };
        }
        degree = (degree * 2).min(cap);
    }
}

// ---------------------------------------------------------------------------
// injectivity sweep

/// Outcome of a pairwise-distinctness sweep over Magnus images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// Number of reduced words enumerated.
    pub words: usize,
    /// Number of distinct series images.
    pub distinct: usize,
    /// Any colliding word pairs; a nonempty list is a verification failure.
    pub collisions: Vec<(GroupWord, GroupWord)>,
}

impl SweepReport {
    pub fn all_distinct(&self) -> bool {
        self.collisions.is_empty() && self.distinct == self.words
    }
}

/// All freely reduced words of letter length at most `max_len` over the
/// given rank, in a deterministic order.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<GroupWord> {
    let mut out = alloc::vec![GroupWord::identity()];
    let mut frontier = alloc::vec![GroupWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            let last = word.syllables().last().copied();
            for gen in 0..rank {
                for sign in [1i64, -1] {
                    // skip the letter that would cancel against the tail
                    if let Some((g, e)) = last {
                        if g == gen && e.signum() == -sign {
                            continue;
                        }
                    }
                    next.push(word.mul(&GroupWord::from_syllables([(gen, sign)])));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Enumerates all reduced words of letter length `≤ max_len` and checks that
/// their Magnus images at the given truncation degree are pairwise distinct.
/// A collision is a verification failure recorded in the report, not an
/// error.
pub fn injectivity_sweep(
    ring: &RingSpec,
    rank: usize,
    max_len: usize,
    degree: usize,
) -> Result<SweepReport, Error> {
    if degree < max_len {
        return Err(Error::InvalidSpec("sweep degree must be at least the letter length"));
    }
    let alphabet = Alphabet::of_rank(rank)?;
    let words = reduced_words(rank, max_len);
    let mut seen: BTreeMap<NcSeries, GroupWord> = BTreeMap::new();
    let mut collisions = Vec::new();
    for word in &words {
        let image = magnus(&GroupRingElement::from_word(ring, word.clone()), &alphabet, degree)?;
        if let Some(previous) = seen.get(&image) {
            collisions.push((previous.clone(), word.clone()));
        } else {
            seen.insert(image, word.clone());
        }
    }
    Ok(SweepReport { words: words.len(), distinct: seen.len(), collisions })
}
