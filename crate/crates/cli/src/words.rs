//! The free-group word grammar (`h`, `k`, `H`, `K`, exponent forms like
//! `h^-3`) and group-ring expressions like `2*hk - 3*H + 1`.

use crate::expr::{parse_element, render_element, ParseError};
use amalg_core::freegroup::{GroupRingElement, GroupWord};
use amalg_core::{BaseRingElement, RingSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

fn letter_to_syllable(c: char) -> Option<(usize, i64)> {
    match c {
        'h' => Some((0, 1)),
        'H' => Some((0, -1)),
        'k' => Some((1, 1)),
        'K' => Some((1, -1)),
        _ => None,
    }
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    input: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(input: &'a str) -> Scanner<'a> {
        Scanner { chars: input.char_indices().peekable(), input }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn col(&mut self) -> usize {
        self.chars.peek().map_or(self.input.len(), |(i, _)| *i) + 1
    }

    fn error<T>(&mut self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: 1, col: self.col(), message: message.into() })
    }

    /// `'-'? digits` after a `^`.
    fn exponent(&mut self) -> Result<i64, ParseError> {
        let negative = matches!(self.chars.peek(), Some((_, '-')));
        if negative {
            self.chars.next();
        }
        let mut digits = String::new();
        while matches!(self.chars.peek(), Some((_, c)) if c.is_ascii_digit()) {
            digits.push(self.chars.next().expect("peeked").1);
        }
        if digits.is_empty() {
            return self.error("expected digits after `^`");
        }
        let value: i64 =
            digits.parse().map_err(|_| ParseError { line: 1, col: self.col(), message: "exponent too large".into() })?;
        Ok(if negative { -value } else { value })
    }

    /// A maximal run of word letters with optional exponents.
    fn word(&mut self) -> Result<GroupWord, ParseError> {
        let mut syllables = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some((_, c)) if letter_to_syllable(*c).is_some() => {
                    let (gen, sign) = letter_to_syllable(*c).expect("checked");
                    self.chars.next();
                    let exponent = if matches!(self.chars.peek(), Some((_, '^'))) {
                        self.chars.next();
                        self.exponent()?
                    } else {
                        1
                    };
                    syllables.push((gen, sign * exponent));
                }
                _ => break,
            }
        }
        Ok(GroupWord::from_syllables(syllables))
    }
}

/// Parse a bare word like `hkHK` or `h^-3 k^2`; a lone `1` is the identity.
pub fn parse_word(input: &str) -> Result<GroupWord, ParseError> {
    let mut scanner = Scanner::new(input);
    scanner.skip_ws();
    if matches!(scanner.chars.peek(), Some((_, '1'))) {
        scanner.chars.next();
        scanner.skip_ws();
        if scanner.chars.peek().is_some() {
            return scanner.error("unexpected input after the identity word");
        }
        return Ok(GroupWord::identity());
    }
    let word = scanner.word()?;
    scanner.skip_ws();
    if scanner.chars.peek().is_some() {
        return scanner.error("unexpected input after the word");
    }
    Ok(word)
}

/// Parse a group-ring expression: a signed sum of terms
/// `coefficient '*' word | coefficient | word`, with numeric or bracketed
/// coefficients. A bare `1` is the identity word.
pub fn parse_group_ring(input: &str, ring: &RingSpec) -> Result<GroupRingElement, ParseError> {
    let mut scanner = Scanner::new(input);
    let mut out = GroupRingElement::zero(ring);
    let mut negate = false;
    scanner.skip_ws();
    if matches!(scanner.chars.peek(), Some((_, '-'))) {
        scanner.chars.next();
        negate = true;
    }
    loop {
        scanner.skip_ws();
        let coeff = parse_coefficient(&mut scanner, ring)?;
        scanner.skip_ws();
        let explicit_product = matches!(scanner.chars.peek(), Some((_, '*')));
        if explicit_product {
            scanner.chars.next();
        }
        let word = if explicit_product || coeff.is_none() {
            scanner.word()?
        } else {
            GroupWord::identity()
        };
        let mut coeff = coeff.unwrap_or_else(|| BaseRingElement::one(ring));
        if negate {
            coeff = coeff.neg();
        }
        out = out.with_added_term(&word, &coeff);

        scanner.skip_ws();
        match scanner.chars.peek() {
            Some((_, '+')) => {
                scanner.chars.next();
                negate = false;
            }
            Some((_, '-')) => {
                scanner.chars.next();
                negate = true;
            }
            None => return Ok(out),
            Some((_, c)) => {
                let c = *c;
                return scanner.error(format!("unexpected `{c}` in group-ring expression"));
            }
        }
    }
}

fn parse_coefficient(
    scanner: &mut Scanner<'_>,
    ring: &RingSpec,
) -> Result<Option<BaseRingElement>, ParseError> {
    match scanner.chars.peek() {
        Some((_, c)) if c.is_ascii_digit() => {
            let mut digits = String::new();
            while matches!(scanner.chars.peek(), Some((_, c)) if c.is_ascii_digit()) {
                digits.push(scanner.chars.next().expect("peeked").1);
            }
            let numerator: BigInt = digits.parse().expect("digits");
            let value = if matches!(scanner.chars.peek(), Some((_, '/'))) {
                scanner.chars.next();
                let mut denominator = String::new();
                while matches!(scanner.chars.peek(), Some((_, c)) if c.is_ascii_digit()) {
                    denominator.push(scanner.chars.next().expect("peeked").1);
                }
                if denominator.is_empty() {
                    return scanner.error("expected digits after `/`");
                }
                BigRational::new(numerator, denominator.parse().expect("digits"))
            } else {
                BigRational::from_integer(numerator)
            };
            let col = scanner.col();
            let element = BaseRingElement::from_rational(ring, &value)
                .map_err(|e| ParseError { line: 1, col, message: e.to_string() })?;
            Ok(Some(element))
        }
        Some((_, '[')) => {
            scanner.chars.next();
            let mut content = String::new();
            loop {
                match scanner.chars.next() {
                    Some((_, ']')) => break,
                    Some((_, c)) => content.push(c),
                    None => return scanner.error("unclosed `[`"),
                }
            }
            let col = scanner.col();
            let element = parse_element(&content, ring)
                .map_err(|e| ParseError { line: 1, col, message: e.message })?;
            Ok(Some(element))
        }
        _ => Ok(None),
    }
}

/// Render a word in the CLI grammar: `h`, `K`, `h^3`, `h^-2`, concatenated.
pub fn render_word(word: &GroupWord) -> String {
    if word.is_identity() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (gen, exp) in word.syllables() {
        let letter = match gen {
            0 => 'h',
            1 => 'k',
            _ => return format!("<rank-{} word>", word.rank_bound()),
        };
        match exp {
            1 => out.push(letter),
            -1 => out.push(letter.to_ascii_uppercase()),
            e => out.push_str(&format!("{letter}^{e}")),
        }
    }
    out
}

/// Render a group-ring element as a signed sum in term order.
pub fn render_group_ring(f: &GroupRingElement) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (word, coeff) in f.terms() {
        let (negative, magnitude) = split_sign(coeff);
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let coefficient_text = match coeff.ring() {
            RingSpec::Integers | RingSpec::Rationals | RingSpec::IntegersMod(_) => {
                render_element(&magnitude)
            }
            _ => format!("[{}]", render_element(&magnitude)),
        };
        if word.is_identity() {
            out.push_str(&coefficient_text);
        } else if magnitude.is_one() {
            out.push_str(&render_word(word));
        } else {
            out.push_str(&coefficient_text);
            out.push('*');
            out.push_str(&render_word(word));
        }
    }
    out
}

fn split_sign(e: &BaseRingElement) -> (bool, BaseRingElement) {
    let negative = match e.ring() {
        RingSpec::Integers => e.integer_value().is_some_and(Signed::is_negative),
        RingSpec::Rationals => e.rational_value().is_some_and(Signed::is_negative),
        _ => false,
    };
    if negative {
        (true, e.neg())
    } else {
        (false, e.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_grammar() {
        let commutator = parse_word("hkHK").unwrap();
        assert_eq!(
            commutator,
            GroupWord::from_syllables([(0, 1), (1, 1), (0, -1), (1, -1)])
        );
        assert_eq!(parse_word("h^-3").unwrap(), GroupWord::from_syllables([(0, -3)]));
        assert_eq!(parse_word("H^2").unwrap(), GroupWord::from_syllables([(0, -2)]));
        assert_eq!(parse_word("hH").unwrap(), GroupWord::identity());
        assert!(parse_word("hxk").is_err());
    }

    #[test]
    fn word_rendering_round_trips() {
        for text in ["1", "h", "K", "h^3", "h^-3", "hkHK", "h^2k^-2"] {
            let word = parse_word(text).unwrap();
            assert_eq!(parse_word(&render_word(&word)).unwrap(), word);
        }
    }

    #[test]
    fn group_ring_grammar() {
        let ring = RingSpec::Integers;
        let parsed = parse_group_ring("2*hk - 3*H + 1", &ring).unwrap();
        let two = BaseRingElement::from_integer(&ring, 2);
        let minus_three = BaseRingElement::from_integer(&ring, -3);
        let expected = GroupRingElement::one(&ring)
            .with_added_term(&parse_word("hk").unwrap(), &two)
            .with_added_term(&parse_word("H").unwrap(), &minus_three);
        assert_eq!(parsed, expected);

        let rendered = render_group_ring(&parsed);
        assert_eq!(parse_group_ring(&rendered, &ring).unwrap(), parsed);
    }

    #[test]
    fn group_ring_collects_terms() {
        let ring = RingSpec::Integers;
        let parsed = parse_group_ring("h + h - 2*h", &ring).unwrap();
        assert!(parsed.is_zero());
        assert_eq!(render_group_ring(&parsed), "0");
    }
}
