//! Expression grammar for elements of `O_d`.
//!
//! ```text
//! element := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*'? factor)*
//! factor  := scalar | atom
//! atom    := 's' word ['\''] | 'I'
//! word    := '[' idx (',' idx)* ']'
//!          | digit+                  (one digit per letter, only for d ≤ 9)
//! scalar  := decimal | '(' decimal ',' decimal ')'
//! ```
//!
//! The apostrophe adjoins the whole atom: `s[1,2]'` is `(s_1 s_2)* = s_2* s_1*`.
//! Products of atoms express mixed words, so `s1*s2'` parses to `s_1 s_2*`
//! (the `*` between factors is optional multiplication, not adjoint).
//! Complex scalars are written `(re,im)`.

use crate::word::{AlgebraElement, MultiIndex, ReducedWord, WordError};
use crate::C64;

/// A parse failure, with the byte position it occurred at.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    d: u32,
}

/// Parse an expression into an element over the alphabet `{1, ..., d}`.
pub fn parse_element(text: &str, d: u32) -> Result<AlgebraElement, ParseError> {
    if d < 2 {
        return Err(ParseError::new(0, "alphabet size must be at least 2"));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        d,
    };
    let out = p.element()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::new(p.pos, "unexpected trailing input"));
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }


    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::new(
                self.pos,
                format!("expected '{}'", b as char),
            )),
        }
    }

    fn element(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(C64::new(-1.0, 0.0));
        }
        while let Some(op) = self.peek() {
            if op != b'+' && op != b'-' {
                break;
            }
            self.pos += 1;
            let next = self.term()?;
            let signed = if op == b'-' {
                next.scale(C64::new(-1.0, 0.0))
            } else {
                next
            };
            acc = acc
                .add(&signed)
                .map_err(|e| ParseError::new(self.pos, e.to_string()))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc
                        .multiply(&f)
                        .map_err(|e| ParseError::new(self.pos, e.to_string()))?;
                }
                Some(b's') | Some(b'I') | Some(b'(') => {
                    let f = self.factor()?;
                    acc = acc
                        .multiply(&f)
                        .map_err(|e| ParseError::new(self.pos, e.to_string()))?;
                }
                Some(b) if b.is_ascii_digit() || b == b'.' => {
                    let f = self.factor()?;
                    acc = acc
                        .multiply(&f)
                        .map_err(|e| ParseError::new(self.pos, e.to_string()))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        match self.peek() {
            Some(b's') => self.atom(),
            Some(b'I') => {
                self.pos += 1;
                Ok(AlgebraElement::unit(self.d))
            }
            Some(b'(') => {
                let z = self.complex_scalar()?;
                Ok(AlgebraElement::unit(self.d).scale(z))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let x = self.decimal()?;
                Ok(AlgebraElement::unit(self.d).scale(C64::new(x, 0.0)))
            }
            Some(b) => Err(ParseError::new(
                self.pos,
                format!("unexpected character '{}'", b as char),
            )),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<AlgebraElement, ParseError> {
        self.expect(b's')?;
        let word_pos = self.pos;
        let letters: Vec<u32> = match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut out = vec![self.index()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    out.push(self.index()?);
                }
                self.expect(b']')?;
                out
            }
            Some(b) if b.is_ascii_digit() => {
                if self.d > 9 {
                    return Err(ParseError::new(
                        self.pos,
                        "digit shorthand is only available for d ≤ 9; use s[i,j,...]",
                    ));
                }
                let mut out = Vec::new();
                while let Some(b) = self.src.get(self.pos).copied() {
                    if !b.is_ascii_digit() {
                        break;
                    }
                    out.push((b - b'0') as u32);
                    self.pos += 1;
                }
                out
            }
            _ => {
                return Err(ParseError::new(
                    self.pos,
                    "expected generator indices after 's'",
                ))
            }
        };
        for &l in &letters {
            if l == 0 || l > self.d {
                return Err(ParseError::new(
                    word_pos,
                    format!("index {l} out of range 1..={}", self.d),
                ));
            }
        }
        let adjoint = if self.src.get(self.pos) == Some(&b'\'') {
            self.pos += 1;
            true
        } else {
            false
        };
        let idx = MultiIndex::new(letters);
        let word = if adjoint {
            ReducedWord::new(MultiIndex::empty(), idx)
        } else {
            ReducedWord::new(idx, MultiIndex::empty())
        };
        AlgebraElement::from_word(self.d, word, C64::new(1.0, 0.0))
            .map_err(|e: WordError| ParseError::new(word_pos, e.to_string()))
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected an index"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::new(start, "index does not fit"))
    }

    fn complex_scalar(&mut self) -> Result<C64, ParseError> {
        self.expect(b'(')?;
        let re = self.signed_decimal()?;
        self.expect(b',')?;
        let im = self.signed_decimal()?;
        self.expect(b')')?;
        Ok(C64::new(re, im))
    }

    fn signed_decimal(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let mut sign = 1.0;
        match self.src.get(self.pos) {
            Some(b'-') => {
                sign = -1.0;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        Ok(sign * self.decimal()?)
    }

    fn decimal(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| {
            b.is_ascii_digit() || *b == b'.' || *b == b'e' || *b == b'E'
                || ((*b == b'-' || *b == b'+')
                    && self.pos > start
                    && matches!(self.src[self.pos - 1], b'e' | b'E'))
        }) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::new(start, "malformed number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(d: u32, left: &[u32], right: &[u32]) -> AlgebraElement {
        AlgebraElement::from_word(
            d,
            ReducedWord::new(MultiIndex::new(left.to_vec()), MultiIndex::new(right.to_vec())),
            C64::new(1.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn grammar_examples() {
        // s1*s2' is the word (I=(1), J=(2))
        let a = parse_element("s1*s2'", 2).unwrap();
        assert!(a.approx_eq(&word(2, &[1], &[2]), 1e-15));
        // bracket form with trailing space, d = 12
        let b = parse_element("s[1,2]' ", 12).unwrap();
        assert!(b.approx_eq(&word(12, &[], &[1, 2]), 1e-15));
        // complex scalar and a sum
        let c = parse_element("(0,1)*s1 + s2*s2'", 2).unwrap();
        let expect = AlgebraElement::generator(2, 1)
            .unwrap()
            .scale(C64::new(0.0, 1.0))
            .add(&word(2, &[2], &[2]))
            .unwrap();
        assert!(c.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn juxtaposition_and_digits() {
        let a = parse_element("2s1", 2).unwrap();
        assert!(a.approx_eq(&AlgebraElement::generator(2, 1).unwrap().scale(C64::new(2.0, 0.0)), 1e-15));
        let b = parse_element("s12'", 2).unwrap();
        assert!(b.approx_eq(&word(2, &[], &[1, 2]), 1e-15));
        let c = parse_element("s1 s1'", 2).unwrap();
        assert!(c.approx_eq(&word(2, &[1], &[1]), 1e-15));
        let d = parse_element("I - s1s1'", 2).unwrap();
        assert!(d.approx_eq(&word(2, &[2], &[2]), 1e-12));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(256))]

        // the parser is total: arbitrary input either parses or reports a
        // positioned error, never panics
        #[test]
        fn parser_never_panics(text in "[ s'I\\[\\]\\(\\),\\.\\+\\-\\*0-9e]{0,24}") {
            match parse_element(&text, 3) {
                Ok(_) => {}
                Err(e) => proptest::prop_assert!(e.pos <= text.len()),
            }
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_element("s1 + s3", 2).unwrap_err();
        assert_eq!(err.pos, 6);
        let err = parse_element("s1 ++ s2", 2).unwrap_err();
        assert!(err.pos >= 4);
        let err = parse_element("s[1,2", 2).unwrap_err();
        assert_eq!(err.pos, 5);
        let err = parse_element("s12", 12).unwrap_err();
        assert!(err.message.contains("shorthand"));
    }
}
