//! Property tests for the structural invariants that hold for arbitrary
//! inputs, with shrinking on failure.

use amalg_core::freegroup::{magnus, GroupRingElement, GroupWord};
use amalg_core::{Alphabet, BaseRingElement, NcSeries, RingSpec, Word};
use proptest::prelude::*;

fn arb_syllables() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..2, -3i64..=3), 0..6)
}

fn arb_word() -> impl Strategy<Value = GroupWord> {
    arb_syllables().prop_map(GroupWord::from_syllables)
}

fn arb_series() -> impl Strategy<Value = NcSeries> {
    let term = (prop::collection::vec(prop::sample::select(vec![b'a', b'b']), 0..4), -9i64..=9);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let ring = RingSpec::Integers;
        let alphabet = Alphabet::ab();
        NcSeries::from_terms(
            &ring,
            &alphabet,
            3,
            terms.into_iter().map(|(letters, c)| {
                (Word::from_letters(letters), BaseRingElement::from_integer(&ring, c))
            }),
        )
        .expect("valid terms")
    })
}

proptest! {
    #[test]
    fn words_are_always_freely_reduced(syllables in arb_syllables()) {
        let word = GroupWord::from_syllables(syllables);
        for pair in word.syllables().windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0, "adjacent syllables share a generator");
        }
        prop_assert!(word.syllables().iter().all(|(_, e)| *e != 0));
    }

    #[test]
    fn word_multiplication_is_associative(u in arb_word(), v in arb_word(), w in arb_word()) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn inverses_cancel_and_reverse(u in arb_word(), v in arb_word()) {
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
    }

    #[test]
    fn generator_powers_add(a in -6i64..=6, b in -6i64..=6) {
        let h = GroupWord::generator(0);
        prop_assert_eq!(h.pow(a).mul(&h.pow(b)), h.pow(a + b));
    }

    #[test]
    fn magnus_respects_single_word_products(u in arb_word(), v in arb_word()) {
        let ring = RingSpec::Integers;
        let alphabet = Alphabet::ab();
        let image = |w: &GroupWord| {
            magnus(&GroupRingElement::from_word(&ring, w.clone()), &alphabet, 3).unwrap()
        };
        prop_assert_eq!(image(&u.mul(&v)), image(&u).mul(&image(&v)).unwrap());
    }

    #[test]
    fn series_addition_commutes(u in arb_series(), v in arb_series()) {
        prop_assert_eq!(u.add(&v).unwrap(), v.add(&u).unwrap());
    }

    #[test]
    fn series_multiplication_distributes(u in arb_series(), v in arb_series(), w in arb_series()) {
        let lhs = u.mul(&v.add(&w).unwrap()).unwrap();
        let rhs = u.mul(&v).unwrap().add(&u.mul(&w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncating_before_or_after_multiplication_agrees(
        u in arb_series(),
        v in arb_series(),
        degree in 0usize..3,
    ) {
        let after = u.mul(&v).unwrap().truncate(degree);
        let before = u.truncate(degree).mul(&v.truncate(degree)).unwrap();
        prop_assert_eq!(after, before);
    }
}
