//! Random generation of small elements, words, and series.
//!
//! These generators exist for property testing and randomized verification
//! sweeps. They draw from deliberately small value ranges so that exact
//! arithmetic stays fast and failures shrink to readable cases. All functions
//! are deterministic given the caller's RNG.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::coproduct::{CoproductElement, SubringSpec};
use crate::freegroup::{GroupRingElement, GroupWord};
use crate::ring::{BaseRingElement, Monomial, MonomialFamily, RingSpec};
use crate::series::{laurent_embed, Alphabet, NcSeries, Word};

fn small_rational(rng: &mut impl Rng) -> BigRational {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=9);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A random element of the given ring, with small coefficients.
pub fn random_element(spec: &RingSpec, rng: &mut impl Rng) -> BaseRingElement {
    match spec {
        RingSpec::Integers => BaseRingElement::from_integer(spec, rng.gen_range(-9i64..=9)),
        RingSpec::IntegersMod(n) => {
            BaseRingElement::from_integer(spec, rng.gen_range(0..*n) as i64)
        }
        RingSpec::Rationals => {
            BaseRingElement::from_rational(spec, &small_rational(rng)).expect("rationals")
        }
        RingSpec::Product { base, copies } => {
            let coords = (0..*copies).map(|_| random_element(base, rng)).collect();
            BaseRingElement::from_coords(spec, coords).expect("matching coords")
        }
        RingSpec::Monomial(family) => {
            let terms = rng.gen_range(0..=3);
            let monomials = (0..terms).map(|_| {
                let m = match family {
                    MonomialFamily::Idempotent { rank } | MonomialFamily::SquareZero { rank } => {
                        if *rank > 0 && rng.gen_range(0..4) > 0 {
                            Monomial::Gen(rng.gen_range(0..*rank))
                        } else {
                            Monomial::One
                        }
                    }
                    MonomialFamily::MonomialSubring => {
                        if rng.gen_range(0..4) > 0 {
                            Monomial::Xy { x: rng.gen_range(0..=4), y: rng.gen_range(1..=3) }
                        } else {
                            Monomial::One
                        }
                    }
                };
                (m, small_rational(rng))
            });
            BaseRingElement::from_monomials(spec, monomials).expect("valid monomials")
        }
    }
}

/// A random truncated series with a handful of nonzero coefficients.
pub fn random_series(
    spec: &RingSpec,
    alphabet: &Alphabet,
    degree: usize,
    rng: &mut impl Rng,
) -> NcSeries {
    let mut series = NcSeries::zero(spec, alphabet, degree);
    let terms = rng.gen_range(0..=5);
    for _ in 0..terms {
        let len = rng.gen_range(0..=degree);
        let letters: Vec<u8> =
            (0..len).map(|_| alphabet.letters()[rng.gen_range(0..alphabet.len())]).collect();
        let word = Word::from_letters(letters);
        let coeff = random_element(spec, rng);
        series = series.with_added_term(&word, &coeff);
    }
    series
}

/// A random freely reduced word with at most `max_syllables` syllables and
/// exponents in `[-3, 3]`.
pub fn random_group_word(rank: usize, max_syllables: usize, rng: &mut impl Rng) -> GroupWord {
    let syllables = rng.gen_range(0..=max_syllables);
    GroupWord::from_syllables((0..syllables).map(|_| {
        let gen = rng.gen_range(0..rank);
        let exp = loop {
            let e = rng.gen_range(-3i64..=3);
            if e != 0 {
                break e;
            }
        };
        (gen, exp)
    }))
}

/// A random group-ring element with a few short words.
pub fn random_group_ring_element(
    spec: &RingSpec,
    rank: usize,
    rng: &mut impl Rng,
) -> GroupRingElement {
    let terms = rng.gen_range(0..=3);
    let mut out = GroupRingElement::zero(spec);
    for _ in 0..terms {
        let word = random_group_word(rank, 3, rng);
        let coeff = random_element(spec, rng);
        out = out.with_added_term(&word, &coeff);
    }
    out
}

/// One of the four built-in subring pairs over letters `a` and `b`:
/// 0 = full series, 1 = Laurent group rings, 2 = polynomials,
/// 3 = ideal-augmented with a small random ideal window.
pub fn subring_pair(
    ring: &RingSpec,
    kind: usize,
    rng: &mut impl Rng,
) -> (SubringSpec, SubringSpec) {
    match kind % 4 {
        0 => (SubringSpec::full(b'a'), SubringSpec::full(b'b')),
        1 => (SubringSpec::laurent(b'a'), SubringSpec::laurent(b'b')),
        2 => (SubringSpec::polynomial(b'a'), SubringSpec::polynomial(b'b')),
        _ => {
            let mut gen = random_element(ring, rng);
            if gen.is_zero() {
                gen = BaseRingElement::from_integer(ring, 2);
            }
            (
                SubringSpec::ideal_augmented(b'a', alloc::vec![gen.clone()]),
                SubringSpec::ideal_augmented(b'b', alloc::vec![gen]),
            )
        }
    }
}

/// A random constant-term-free single-letter series shaped like a member of
/// the subring's augmentation ideal. For the ideal-augmented variant the
/// series is built as `letter·p(letter) + Σ h^{-i}·letter·c_i` with each
/// `c_i` drawn from the declared ideal window.
pub fn random_subring_slot(
    ring: &RingSpec,
    spec: &SubringSpec,
    degree: usize,
    rng: &mut impl Rng,
) -> NcSeries {
    let letter = spec.letter();
    let alphabet = Alphabet::single(letter);
    let letter_series = NcSeries::letter(ring, &alphabet, degree, letter);
    match spec.kind() {
        crate::coproduct::SubringKind::IdealAugmented { ideal } => {
            let poly = random_series(ring, &alphabet, degree.saturating_sub(1), rng);
            let lifted = NcSeries::from_terms(
                ring,
                &alphabet,
                degree,
                poly.terms().map(|(w, c)| (w.clone(), c.clone())),
            )
            .expect("lift keeps the terms");
            let mut out = letter_series.mul(&lifted).expect("same spec");
            for i in 1..=2i64 {
                let mut coeff = BaseRingElement::zero(ring);
                for g in ideal {
                    coeff = coeff
                        .add(&g.mul(&random_element(ring, rng)).expect("same ring"))
                        .expect("same ring");
                }
                let term = laurent_embed(ring, letter, -i, degree)
                    .mul(&letter_series)
                    .expect("same spec")
                    .scale(&coeff)
                    .expect("same ring");
                out = out.add(&term).expect("same spec");
            }
            out
        }
        _ => random_series(ring, &alphabet, degree, rng).split_constant().1,
    }
}

/// A random coproduct element: a scalar plus up to three elementary tensors
/// of alternating types of length at most three.
pub fn random_coproduct_element(
    ring: &RingSpec,
    degree: usize,
    left: &SubringSpec,
    right: &SubringSpec,
    rng: &mut impl Rng,
) -> CoproductElement {
    let scalar = random_element(ring, rng);
    let mut out =
        CoproductElement::scalar_element(ring, degree, left.clone(), right.clone(), scalar)
            .expect("scalar from the same ring");
    let tensors = rng.gen_range(0..=3);
    for _ in 0..tensors {
        let len = rng.gen_range(1..=3);
        let mut on_left = rng.gen_bool(0.5);
        let mut slots = Vec::with_capacity(len);
        for _ in 0..len {
            let side = if on_left { left } else { right };
            slots.push(random_subring_slot(ring, side, degree, rng));
            on_left = !on_left;
        }
        out = out.with_tensor(slots).expect("alternating slots");
    }
    out
}

/// A random series whose constant term is a unit, so it is invertible.
pub fn random_unit_series(
    spec: &RingSpec,
    alphabet: &Alphabet,
    degree: usize,
    rng: &mut impl Rng,
) -> NcSeries {
    loop {
        let candidate = random_series(spec, alphabet, degree, rng);
        let (constant, tail) = candidate.split_constant();
        match constant.invert() {
            Some(_) if !constant.is_zero() => return candidate,
            _ => {
                // patch in a unit constant instead of rejecting forever
                let one = BaseRingElement::one(spec);
                let empty = Word::empty();
                let fixed = tail.with_added_term(&empty, &one);
                if fixed.split_constant().0.invert().is_some() {
                    return fixed;
                }
            }
        }
    }
}
