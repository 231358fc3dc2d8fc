//! Grammar properties: printed forms re-parse to equal values for arbitrary
//! term data, with shrinking on failure.

use amalg_cli::expr::{parse_series, render_series};
use amalg_cli::words::{parse_word, render_word};
use amalg_core::freegroup::GroupWord;
use amalg_core::{Alphabet, BaseRingElement, NcSeries, RingSpec, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn arb_rational_series() -> impl Strategy<Value = NcSeries> {
    let coeff = (-20i64..=20, 1i64..=12);
    let term = (prop::collection::vec(prop::sample::select(vec![b'a', b'b']), 0..4), coeff);
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        let ring = RingSpec::Rationals;
        NcSeries::from_terms(
            &ring,
            &Alphabet::ab(),
            3,
            terms.into_iter().map(|(letters, (p, q))| {
                let value = BigRational::new(BigInt::from(p), BigInt::from(q));
                (
                    Word::from_letters(letters),
                    BaseRingElement::from_rational(&ring, &value).expect("rationals"),
                )
            }),
        )
        .expect("valid terms")
    })
}

proptest! {
    #[test]
    fn printed_rational_series_re_parse(series in arb_rational_series()) {
        let printed = render_series(&series);
        let reparsed = parse_series(&printed, &RingSpec::Rationals, &Alphabet::ab(), 3)
            .map_err(|e| TestCaseError::fail(format!("`{printed}`: {e}")))?;
        prop_assert_eq!(reparsed, series, "printed `{}`", printed);
    }

    #[test]
    fn printed_words_re_parse(syllables in prop::collection::vec((0usize..2, -4i64..=4), 0..5)) {
        let word = GroupWord::from_syllables(syllables);
        let printed = render_word(&word);
        let reparsed = parse_word(&printed)
            .map_err(|e| TestCaseError::fail(format!("`{printed}`: {e}")))?;
        prop_assert_eq!(reparsed, word, "printed `{}`", printed);
    }
}
