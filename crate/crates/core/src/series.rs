//! Truncated noncommutative power series with sparse word-indexed
//! coefficients.
//!
//! A series carries its base ring, its alphabet, and an explicit truncation
//! degree; the truncation degree participates in equality, and mixed-degree
//! arithmetic truncates to the minimum so precision loss is always visible in
//! the types. Only nonzero coefficients are stored, keyed by words in graded
//! order (length first, then lexicographic by the alphabet's letter order).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::ring::{BaseRingElement, RingSpec};
use crate::Error;

/// An ordered set of letters. Letters are bytes and must be declared in
/// strictly increasing order; the declared order is the order used by words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = u8>) -> Result<Alphabet, Error> {
        let letters: Vec<u8> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::InvalidSpec("alphabet needs at least one letter"));
        }
        if !letters.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec("alphabet letters must strictly increase"));
        }
        Ok(Alphabet { letters })
    }

    /// The default two-letter alphabet `{a, b}`.
    pub fn ab() -> Alphabet {
        Alphabet { letters: alloc::vec![b'a', b'b'] }
    }

    pub fn single(letter: u8) -> Alphabet {
        Alphabet { letters: alloc::vec![letter] }
    }

    /// The first `rank` lowercase letters, one per free-group generator.
    pub fn of_rank(rank: usize) -> Result<Alphabet, Error> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidSpec("rank must be between 1 and 26"));
        }
        Alphabet::new((0..rank).map(|i| b'a' + i as u8))
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.letters.binary_search(&letter).is_ok()
    }

    /// True when every letter of `other` is a letter of `self`.
    pub fn includes(&self, other: &Alphabet) -> bool {
        other.letters.iter().all(|l| self.contains(*l))
    }
}

/// A word over an alphabet: the keys of a series' coefficient map. The empty
/// word is the monoid identity. Words compare in graded order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = u8>) -> Word {
        Word { letters: letters.into_iter().collect() }
    }

    pub fn letter(l: u8) -> Word {
        Word { letters: alloc::vec![l] }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", *l as char)?;
        }
        Ok(())
    }
}

/// A truncated noncommutative power series: a finite map from words of
/// length at most `degree` to nonzero base-ring elements. Two series are
/// equal exactly when ring, alphabet, degree, and coefficients all agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NcSeries {
    ring: RingSpec,
    alphabet: Alphabet,
    degree: usize,
    coeffs: BTreeMap<Word, BaseRingElement>,
}

impl NcSeries {
    pub fn zero(ring: &RingSpec, alphabet: &Alphabet, degree: usize) -> NcSeries {
        NcSeries {
            ring: ring.clone(),
            alphabet: alphabet.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(
        ring: &RingSpec,
        alphabet: &Alphabet,
        degree: usize,
        value: &BaseRingElement,
    ) -> NcSeries {
        NcSeries::zero(ring, alphabet, degree).with_added_term(&Word::empty(), value)
    }

    pub fn one(ring: &RingSpec, alphabet: &Alphabet, degree: usize) -> NcSeries {
        NcSeries::constant(ring, alphabet, degree, &BaseRingElement::one(ring))
    }

    /// The series consisting of the single letter `l` (zero when the degree
    /// is zero, since the letter is then truncated away).
    pub fn letter(ring: &RingSpec, alphabet: &Alphabet, degree: usize, l: u8) -> NcSeries {
        NcSeries::zero(ring, alphabet, degree)
            .with_added_term(&Word::letter(l), &BaseRingElement::one(ring))
    }

    /// Build a series from explicit terms, checking each coefficient's ring
    /// and each word's letters.
    pub fn from_terms(
        ring: &RingSpec,
        alphabet: &Alphabet,
        degree: usize,
        terms: impl IntoIterator<Item = (Word, BaseRingElement)>,
    ) -> Result<NcSeries, Error> {
        let mut out = NcSeries::zero(ring, alphabet, degree);
        for (word, coeff) in terms {
            if coeff.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !word.letters().iter().all(|l| alphabet.contains(*l)) {
                return Err(Error::AlphabetMismatch);
            }
            out = out.with_added_term(&word, &coeff);
        }
        Ok(out)
    }

    /// Add `coeff · word` into the series, discarding words beyond the
    /// truncation degree and keeping the map normalized.
    ///
    /// Panics if the coefficient's ring or the word's letters do not match;
    /// use [`NcSeries::from_terms`] for validated construction.
    pub fn with_added_term(mut self, word: &Word, coeff: &BaseRingElement) -> NcSeries {
        assert_eq!(coeff.ring(), &self.ring, "coefficient from a different ring");
        assert!(
            word.letters().iter().all(|l| self.alphabet.contains(*l)),
            "word uses letters outside the alphabet"
        );
        if word.len() > self.degree || coeff.is_zero() {
            return self;
        }
        let entry = self
            .coeffs
            .entry(word.clone())
            .or_insert_with(|| BaseRingElement::zero(&self.ring));
        *entry = entry.add_unchecked(coeff);
        if entry.is_zero() {
            self.coeffs.remove(word);
        }
        self
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `word` (zero when absent).
    pub fn coefficient(&self, word: &Word) -> BaseRingElement {
        self.coeffs.get(word).cloned().unwrap_or_else(|| BaseRingElement::zero(&self.ring))
    }

    /// Iterate over the nonzero terms in graded word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BaseRingElement)> {
        self.coeffs.iter()
    }

    /// The set of words with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<Word> {
        self.coeffs.keys().cloned().collect()
    }

    /// Re-truncate to a smaller degree (no-op when `new_degree` is larger).
    pub fn truncate(&self, new_degree: usize) -> NcSeries {
        let degree = new_degree.min(self.degree);
        NcSeries {
            ring: self.ring.clone(),
            alphabet: self.alphabet.clone(),
            degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.len() <= degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-express over a larger alphabet (e.g. a single-letter series viewed
    /// inside the two-letter ring).
    pub fn embed_into(&self, alphabet: &Alphabet) -> Result<NcSeries, Error> {
        if !alphabet.includes(&self.alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(NcSeries {
            ring: self.ring.clone(),
            alphabet: alphabet.clone(),
            degree: self.degree,
            coeffs: self.coeffs.clone(),
        })
    }

    fn check_compatible(&self, other: &NcSeries) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &NcSeries) -> Result<NcSeries, Error> {
        self.check_compatible(other)?;
        let degree = self.degree.min(other.degree);
        let mut out = self.truncate(degree);
        for (w, c) in &other.coeffs {
            if w.len() <= degree {
                out = out.with_added_term(w, c);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcSeries {
        NcSeries {
            ring: self.ring.clone(),
            alphabet: self.alphabet.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &NcSeries) -> Result<NcSeries, Error> {
        self.add(&other.neg())
    }

    /// Multiply every coefficient by a ring scalar.
    pub fn scale(&self, scalar: &BaseRingElement) -> Result<NcSeries, Error> {
        if scalar.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = NcSeries::zero(&self.ring, &self.alphabet, self.degree);
        for (w, c) in &self.coeffs {
            out = out.with_added_term(w, &scalar.mul_unchecked(c));
        }
        Ok(out)
    }

    /// Truncated Cauchy product: the coefficient of `w` is the sum of
    /// `f(w1)·g(w2)` over all factorizations `w = w1 w2`; words longer than
    /// the result degree are discarded. The result degree is the minimum of
    /// the factor degrees.
    pub fn mul(&self, other: &NcSeries) -> Result<NcSeries, Error> {
        self.check_compatible(other)?;
        let degree = self.degree.min(other.degree);
        let mut out = NcSeries::zero(&self.ring, &self.alphabet, degree);
        for (w1, c1) in &self.coeffs {
            if w1.len() > degree {
                continue;
            }
            for (w2, c2) in &other.coeffs {
                if w1.len() + w2.len() > degree {
                    continue;
                }
                out = out.with_added_term(&w1.concat(w2), &c1.mul_unchecked(c2));
            }
        }
        Ok(out)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exp: u64) -> NcSeries {
        let mut result = NcSeries::one(&self.ring, &self.alphabet, self.degree);
        let mut base = self.clone();
        let mut exp = exp;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base).expect("same spec");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same spec");
            }
        }
        result
    }

    /// Split off the constant term: returns `(scalar, tail)` with
    /// `self = scalar + tail` and `tail` constant-term-free.
    pub fn split_constant(&self) -> (BaseRingElement, NcSeries) {
        let scalar = self.coefficient(&Word::empty());
        let mut tail = self.clone();
        tail.coeffs.remove(&Word::empty());
        (scalar, tail)
    }

    /// Truncated inverse, when the constant term is a unit; `None` otherwise.
    ///
    /// Uses the fixpoint iteration `v_0 = c^{-1}`, `v_{k+1} = c^{-1}(1 - t v_k)`
    /// where `self = c + t`; after `degree` steps the iterate is exact at the
    /// truncation, uniformly over all supported rings.
    pub fn invert(&self) -> Option<NcSeries> {
        let (constant, tail) = self.split_constant();
        let c_inv = constant.invert()?;
        let one = NcSeries::one(&self.ring, &self.alphabet, self.degree);
        let mut v = NcSeries::constant(&self.ring, &self.alphabet, self.degree, &c_inv);
        for _ in 0..self.degree {
            let correction = one.sub(&tail.mul(&v).expect("same spec")).expect("same spec");
            v = correction.scale(&c_inv).expect("same ring");
        }
        Some(v)
    }
}

/// The truncated expansion of `(1 + letter)^m`: binomial for `m ≥ 0`, an
/// inverted geometric power for `m < 0`. This is the image of the Laurent
/// generator `h^m` inside the single-letter series ring.
pub fn laurent_embed(ring: &RingSpec, letter: u8, m: i64, degree: usize) -> NcSeries {
    let alphabet = Alphabet::single(letter);
    let h = NcSeries::one(ring, &alphabet, degree)
        .with_added_term(&Word::letter(letter), &BaseRingElement::one(ring));
    if m >= 0 {
        h.pow(m as u64)
    } else {
        let h_inv = h.invert().expect("1 + letter has unit constant term");
        h_inv.pow(m.unsigned_abs())
    }
}
