//! The series expression grammar and its canonical printer.
//!
//! Expressions are whitespace-insensitive:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] digits)*
//! atom   := number | letter | '[' element ']' | '(' expr ')'
//!         | 'inv' '(' expr ')' | '-' atom
//! number := digits ('/' digits)?
//! ```
//!
//! Ring-element literals in brackets use each ring's own display syntax,
//! e.g. `[e1]`, `[2*e0 - e1]`, `[x^2*y]`, `[(1,0,1/2)]`. Printed series list
//! terms in graded word order (`1 + a - b + 2*a*b`) and re-parse to an equal
//! series. Parse errors carry line and column.

use amalg_core::ring::{Monomial, MonomialFamily};
use amalg_core::{Alphabet, BaseRingElement, NcSeries, RingSpec, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Number(BigRational),
    Letter(u8),
    Literal(String), // bracket contents, unparsed
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Lexer<'a> {
        Lexer { chars: input.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn digits(&mut self, first: char) -> String {
        let mut out = String::from(first);
        while let Some(c) = self.chars.peek() {
            if c.is_ascii_digit() {
                out.push(*c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn next_token(&mut self) -> Result<(Pos, Token), ParseError> {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
        let pos = self.pos();
        let Some(c) = self.bump() else {
            return Ok((pos, Token::Eof));
        };
        let token = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            '[' => {
                let mut content = String::new();
                loop {
                    match self.bump() {
                        Some(']') => break,
                        Some(c) => content.push(c),
                        None => {
                            return Err(ParseError::new(pos.line, pos.col, "unclosed `[`"))
                        }
                    }
                }
                Token::Literal(content)
            }
            c if c.is_ascii_digit() => {
                let numerator = self.digits(c);
                if self.chars.peek() == Some(&'/') {
                    self.bump();
                    let d = self.pos();
                    match self.bump() {
                        Some(c) if c.is_ascii_digit() => {
                            let denominator = self.digits(c);
                            let num: BigInt = numerator.parse().expect("digits");
                            let den: BigInt = denominator.parse().expect("digits");
                            if den.is_zero() {
                                return Err(ParseError::new(d.line, d.col, "zero denominator"));
                            }
                            Token::Number(BigRational::new(num, den))
                        }
                        _ => return Err(ParseError::new(d.line, d.col, "expected digits after `/`")),
                    }
                } else {
                    let num: BigInt = numerator.parse().expect("digits");
                    Token::Number(BigRational::from_integer(num))
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::from(c);
                while matches!(self.chars.peek(), Some(n) if n.is_ascii_alphanumeric()) {
                    word.push(self.bump().expect("peeked"));
                }
                if word.len() == 1 {
                    Token::Letter(word.as_bytes()[0])
                } else {
                    Token::Ident(word)
                }
            }
            other => {
                return Err(ParseError::new(pos.line, pos.col, format!("unexpected `{other}`")))
            }
        };
        Ok((pos, token))
    }
}

// ---------------------------------------------------------------------------
// series parser

pub struct SeriesContext<'a> {
    pub ring: &'a RingSpec,
    pub alphabet: &'a Alphabet,
    pub degree: usize,
}

struct Parser<'a> {
    tokens: Vec<(Pos, Token)>,
    index: usize,
    ctx: SeriesContext<'a>,
}

/// Parse an expression into a truncated series over the context's ring,
/// alphabet, and degree.
pub fn parse_series(
    input: &str,
    ring: &RingSpec,
    alphabet: &Alphabet,
    degree: usize,
) -> Result<NcSeries, ParseError> {
    let mut lexer = Lexer::new(input);
    let mut tokens = Vec::new();
    loop {
        let (pos, token) = lexer.next_token()?;
        let done = token == Token::Eof;
        tokens.push((pos, token));
        if done {
            break;
        }
    }
    let mut parser = Parser { tokens, index: 0, ctx: SeriesContext { ring, alphabet, degree } };
    let series = parser.expr()?;
    parser.expect_eof()?;
    Ok(series)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.index].1
    }

    fn pos(&self) -> Pos {
        self.tokens[self.index].0
    }

    fn bump(&mut self) -> (Pos, Token) {
        let t = self.tokens[self.index].clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.pos();
        Err(ParseError::new(pos.line, pos.col, message))
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Token::Eof {
            Ok(())
        } else {
            self.fail("trailing input")
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<NcSeries, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).expect("same context");
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).expect("same context");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcSeries, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Token::Star {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).expect("same context");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcSeries, ParseError> {
        // unary minus applies to the whole factor: -b^2 is -(b^2)
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut base = self.atom()?;
        while *self.peek() == Token::Caret {
            self.bump();
            let negative = if *self.peek() == Token::Minus {
                self.bump();
                true
            } else {
                false
            };
            let exponent = match self.bump() {
                (_, Token::Number(n)) if n.is_integer() && !n.is_negative() => {
                    u64::try_from(n.to_integer()).map_err(|_| {
                        ParseError::new(self.pos().line, self.pos().col, "exponent too large")
                    })?
                }
                _ => return self.fail("expected an integer exponent after `^`"),
            };
            if negative {
                base = match base.invert() {
                    Some(inverse) => inverse,
                    None => return self.fail("series is not invertible (constant term is not a unit)"),
                };
            }
            base = base.pow(exponent);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NcSeries, ParseError> {
        let (pos, token) = self.bump();
        match token {
            Token::Number(n) => match BaseRingElement::from_rational(self.ctx.ring, &n) {
                Ok(value) => {
                    Ok(NcSeries::constant(self.ctx.ring, self.ctx.alphabet, self.ctx.degree, &value))
                }
                Err(e) => Err(ParseError::new(pos.line, pos.col, e.to_string())),
            },
            Token::Letter(l) if self.ctx.alphabet.contains(l) => {
                Ok(NcSeries::letter(self.ctx.ring, self.ctx.alphabet, self.ctx.degree, l))
            }
            Token::Letter(l) => Err(ParseError::new(
                pos.line,
                pos.col,
                format!("letter `{}` is not in the alphabet", l as char),
            )),
            Token::Literal(content) => {
                let value = parse_element(&content, self.ctx.ring)
                    .map_err(|e| ParseError::new(pos.line, pos.col, e.message))?;
                Ok(NcSeries::constant(self.ctx.ring, self.ctx.alphabet, self.ctx.degree, &value))
            }
            Token::Ident(name) if name == "inv" => {
                self.expect(Token::LParen, "`(` after inv")?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                match inner.invert() {
                    Some(inverse) => Ok(inverse),
                    None => Err(ParseError::new(
                        pos.line,
                        pos.col,
                        "series is not invertible (constant term is not a unit)",
                    )),
                }
            }
            Token::Ident(name) => {
                Err(ParseError::new(pos.line, pos.col, format!("unknown name `{name}`")))
            }
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(ParseError::new(pos.line, pos.col, "expected a term")),
        }
    }
}

// ---------------------------------------------------------------------------
// ring-element literals

/// Parse a bracket-literal body (without the brackets) as a ring element:
/// numbers for the numeric rings, `(c, …)` tuples for product rings, signed
/// sums like `2*e0 - e1` or `1 + x^2*y` for the monomial families.
pub fn parse_element(input: &str, ring: &RingSpec) -> Result<BaseRingElement, ParseError> {
    let mut lexer = Lexer::new(input);
    let mut tokens = Vec::new();
    loop {
        let (pos, token) = lexer.next_token()?;
        let done = token == Token::Eof;
        tokens.push((pos, token));
        if done {
            break;
        }
    }
    let mut parser = ElementParser { tokens, index: 0, ring: ring.clone() };
    let value = parser.element()?;
    parser.expect_eof()?;
    Ok(value)
}

struct ElementParser {
    tokens: Vec<(Pos, Token)>,
    index: usize,
    ring: RingSpec,
}

impl ElementParser {
    fn peek(&self) -> &Token {
        &self.tokens[self.index].1
    }

    fn bump(&mut self) -> (Pos, Token) {
        let t = self.tokens[self.index].clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.tokens[self.index].0;
        Err(ParseError::new(pos.line, pos.col, message))
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Token::Eof {
            Ok(())
        } else {
            self.fail("trailing input in ring element literal")
        }
    }

    fn element(&mut self) -> Result<BaseRingElement, ParseError> {
        if let RingSpec::Product { .. } = &self.ring {
            return self.tuple();
        }
        let mut acc = BaseRingElement::zero(&self.ring);
        let mut negate = match self.peek() {
            Token::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        loop {
            let term = self.signed_term(negate)?;
            acc = acc.add(&term).expect("same ring");
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    negate = false;
                }
                Token::Minus => {
                    self.bump();
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn tuple(&mut self) -> Result<BaseRingElement, ParseError> {
        let (base, copies) = match &self.ring {
            RingSpec::Product { base, copies } => ((**base).clone(), *copies),
            _ => unreachable!("tuple called for products only"),
        };
        match self.bump() {
            (_, Token::LParen) => {}
            _ => return self.fail("expected `(` for a product-ring literal"),
        }
        let mut coords = Vec::new();
        loop {
            let negative = match self.peek() {
                Token::Minus => {
                    self.bump();
                    true
                }
                _ => false,
            };
            let value = match self.bump() {
                (pos, Token::Number(n)) => {
                    let n = if negative { -n } else { n };
                    BaseRingElement::from_rational(&base, &n)
                        .map_err(|e| ParseError::new(pos.line, pos.col, e.to_string()))?
                }
                _ => return self.fail("expected a number in the tuple"),
            };
            coords.push(value);
            match self.bump() {
                (_, Token::Comma) => continue,
                (_, Token::RParen) => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        if coords.len() != copies {
            return self.fail(format!("expected {copies} coordinates, found {}", coords.len()));
        }
        BaseRingElement::from_coords(&self.ring, coords)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    /// One term of a signed sum: `number`, `number '*' monomial`, or a bare
    /// monomial.
    fn signed_term(&mut self, negate: bool) -> Result<BaseRingElement, ParseError> {
        let coeff = match self.peek() {
            Token::Number(_) => {
                let (_, Token::Number(n)) = self.bump() else { unreachable!() };
                if *self.peek() == Token::Star {
                    self.bump();
                    Some(n)
                } else {
                    let n = if negate { -n } else { n };
                    let (pos, _) = self.tokens[self.index.saturating_sub(1)];
                    return BaseRingElement::from_rational(&self.ring, &n)
                        .map_err(|e| ParseError::new(pos.line, pos.col, e.to_string()));
                }
            }
            _ => None,
        };
        let monomial = self.monomial()?;
        let mut coeff = coeff.unwrap_or_else(BigRational::one);
        if negate {
            coeff = -coeff;
        }
        BaseRingElement::from_monomials(&self.ring, [(monomial, coeff)])
            .map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let family = match &self.ring {
            RingSpec::Monomial(f) => *f,
            _ => return self.fail("basis monomials exist only in the monomial families"),
        };
        match family {
            MonomialFamily::Idempotent { .. } | MonomialFamily::SquareZero { .. } => {
                let expected = if matches!(family, MonomialFamily::Idempotent { .. }) {
                    'e'
                } else {
                    'x'
                };
                match self.bump() {
                    (pos, Token::Ident(name)) => {
                        let (head, digits) = name.split_at(1);
                        if !head.starts_with(expected) || digits.is_empty() {
                            return Err(ParseError::new(
                                pos.line,
                                pos.col,
                                format!("expected a basis monomial like `{expected}0`"),
                            ));
                        }
                        let index: usize = digits.parse().map_err(|_| {
                            ParseError::new(pos.line, pos.col, "bad basis index")
                        })?;
                        Ok(Monomial::Gen(index))
                    }
                    (pos, _) => Err(ParseError::new(
                        pos.line,
                        pos.col,
                        format!("expected a basis monomial like `{expected}0`"),
                    )),
                }
            }
            MonomialFamily::MonomialSubring => {
                // x (^i)? * y (^k)?  |  y (^k)?
                let mut xdeg = 0u64;
                if *self.peek() == Token::Letter(b'x') {
                    self.bump();
                    xdeg = self.optional_exponent(1)?;
                    match self.bump() {
                        (_, Token::Star) => {}
                        (pos, _) => {
                            return Err(ParseError::new(
                                pos.line,
                                pos.col,
                                "bare x powers lie outside the subring; expected `*y`",
                            ))
                        }
                    }
                }
                match self.bump() {
                    (_, Token::Letter(b'y')) => {
                        let ydeg = self.optional_exponent(1)?;
                        Ok(Monomial::Xy { x: xdeg, y: ydeg })
                    }
                    (pos, _) => {
                        Err(ParseError::new(pos.line, pos.col, "expected a monomial in x and y"))
                    }
                }
            }
        }
    }

    fn optional_exponent(&mut self, default: u64) -> Result<u64, ParseError> {
        if *self.peek() != Token::Caret {
            return Ok(default);
        }
        self.bump();
        match self.bump() {
            (pos, Token::Number(n)) if n.is_integer() && !n.is_negative() => u64::try_from(
                n.to_integer(),
            )
            .map_err(|_| ParseError::new(pos.line, pos.col, "exponent too large")),
            (pos, _) => Err(ParseError::new(pos.line, pos.col, "expected a nonnegative exponent")),
        }
    }
}

// ---------------------------------------------------------------------------
// printers

/// Is this element rendered with a leading minus when used as a term
/// coefficient? Only rings with a canonical sign participate.
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

fn needs_brackets(e: &BaseRingElement) -> bool {
    !matches!(e.ring(), RingSpec::Integers | RingSpec::Rationals | RingSpec::IntegersMod(_))
}

/// Render an element as a bracket-literal body (the inverse of
/// [`parse_element`]).
pub fn render_element(e: &BaseRingElement) -> String {
    e.to_string()
}

fn render_word(word: &Word) -> String {
    let mut out = String::new();
    let letters = word.letters();
    let mut i = 0;
    while i < letters.len() {
        let letter = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == letter {
            run += 1;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push(letter as char);
        if run > 1 {
            out.push_str(&format!("^{run}"));
        }
        i += run;
    }
    out
}

/// Canonical printed form of a series: terms in graded word order, e.g.
/// `1 + a - b + 2*a*b`. The output re-parses to an equal series at the same
/// ring, alphabet, and degree.
pub fn render_series(series: &NcSeries) -> String {
    if series.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (word, coeff) in series.terms() {
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
        let coefficient_text = if needs_brackets(&magnitude) {
            format!("[{}]", render_element(&magnitude))
        } else {
            render_element(&magnitude)
        };
        if word.is_empty() {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn parse_z(input: &str, degree: usize) -> NcSeries {
        parse_series(input, &z(), &Alphabet::ab(), degree).unwrap()
    }

    #[test]
    fn parses_and_prints_the_canonical_example() {
        let s = parse_z("1 + a - b + 2*a*b", 2);
        assert_eq!(render_series(&s), "1 + a - b + 2*a*b");
    }

    #[test]
    fn whitespace_and_parentheses() {
        assert_eq!(parse_z(" ( 1+a ) * (1+b)", 2), parse_z("1 + a + b + a*b", 2));
    }

    #[test]
    fn powers_and_inverse() {
        assert_eq!(parse_z("(1+a)^2", 2), parse_z("1 + 2*a + a^2", 2));
        assert_eq!(parse_z("inv(1+a)", 3), parse_z("1 - a + a^2 - a^3", 3));
        assert_eq!(parse_z("(1+a)^-1", 3), parse_z("inv(1+a)", 3));
        assert!(parse_series("inv(a)", &z(), &Alphabet::ab(), 3).is_err());
    }

    #[test]
    fn error_positions() {
        let err = parse_series("1 +\n* a", &z(), &Alphabet::ab(), 2).unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse_series("1 + c", &z(), &Alphabet::ab(), 2).unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
    }

    #[test]
    fn fraction_literals_need_rationals() {
        assert!(parse_series("1/2", &z(), &Alphabet::ab(), 2).is_err());
        let q = RingSpec::Rationals;
        let s = parse_series("1/2 + 1/3*a", &q, &Alphabet::ab(), 2).unwrap();
        assert_eq!(render_series(&s), "1/2 + 1/3*a");
        assert_eq!(parse_z("4/2", 2), parse_z("2", 2)); // integral fractions reduce
    }

    #[test]
    fn bracket_literals_per_ring() {
        let idem = RingSpec::idempotent(3);
        let s = parse_series("[e1] + [2*e0 - e1]*a", &idem, &Alphabet::ab(), 2).unwrap();
        let rendered = render_series(&s);
        assert_eq!(rendered, "[e1] + [2*e0 - e1]*a");
        let reparsed = parse_series(&rendered, &idem, &Alphabet::ab(), 2).unwrap();
        assert_eq!(reparsed, s);

        let monsub = RingSpec::monomial_subring();
        let s = parse_series("[x^2*y] - [y^2]*b", &monsub, &Alphabet::ab(), 3).unwrap();
        let reparsed = parse_series(&render_series(&s), &monsub, &Alphabet::ab(), 3).unwrap();
        assert_eq!(reparsed, s);

        let prod = RingSpec::product(RingSpec::Rationals, 2).unwrap();
        let s = parse_series("[(1,-1/2)]*a", &prod, &Alphabet::ab(), 2).unwrap();
        let reparsed = parse_series(&render_series(&s), &prod, &Alphabet::ab(), 2).unwrap();
        assert_eq!(reparsed, s);
    }

    #[test]
    fn zmod_coefficients_have_no_sign() {
        let r = RingSpec::integers_mod(4).unwrap();
        let s = parse_series("3 + 2*a - a", &r, &Alphabet::ab(), 1).unwrap();
        assert_eq!(render_series(&s), "3 + a");
    }
}
