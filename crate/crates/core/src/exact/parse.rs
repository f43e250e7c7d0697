//! Text syntax for exact values.
//!
//! Numbers: `7/3`, `sqrt(2)`, `(1+sqrt(5))/2`, `-3*sqrt(2)/2`; any sum,
//! product or quotient of integers and square roots that stays inside one
//! quadratic field. Continued fractions: `[a0; a1, a2, (b1, b2)]` where the
//! parenthesized block is the period. Whitespace is ignored throughout.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ContinuedFraction, QuadIrr};
use crate::error::{Error, Result};

/// Character cursor shared by every parser in the crate.
pub(crate) struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    /// Position (in characters of the original input) of the next token.
    pub(crate) fn position(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.src.chars().count())
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("'{c}'")))
        }
    }

    pub(crate) fn eat_word(&mut self, word: &str) -> bool {
        let n = word.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .map(|&(_, c)| c)
                .eq(word.chars());
        if matches {
            self.pos += n;
        }
        matches
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub(crate) fn error(&self, expected: impl Into<String>) -> Error {
        Error::parse(self.position(), expected)
    }

    /// Unsigned decimal integer.
    pub(crate) fn natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    /// Optionally signed decimal integer.
    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let n = self.natural()?;
        Ok(if negative { -n } else { n })
    }
}

/// Parses an exact value.
pub fn parse_value(src: &str) -> Result<QuadIrr> {
    let mut cur = Cursor::new(src);
    let v = expr(&mut cur)?;
    cur.finish()?;
    Ok(v)
}

fn expr(cur: &mut Cursor) -> Result<QuadIrr> {
    let mut acc = term(cur)?;
    loop {
        if cur.eat('+') {
            acc = acc.try_add(&term(cur)?)?;
        } else if cur.eat('-') {
            acc = acc.try_sub(&term(cur)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(cur: &mut Cursor) -> Result<QuadIrr> {
    let mut acc = unary(cur)?;
    loop {
        if cur.eat('*') {
            acc = acc.try_mul(&unary(cur)?)?;
        } else if cur.peek() == Some('/') {
            let at = cur.position();
            cur.bump();
            let rhs = unary(cur)?;
            if rhs.is_zero() {
                return Err(Error::parse(at, "non-zero divisor"));
            }
            acc = acc.try_div(&rhs)?;
        } else {
            return Ok(acc);
        }
    }
}

fn unary(cur: &mut Cursor) -> Result<QuadIrr> {
    if cur.eat('-') {
        return Ok(-unary(cur)?);
    }
    if cur.eat('+') {
        return unary(cur);
    }
    primary(cur)
}

fn primary(cur: &mut Cursor) -> Result<QuadIrr> {
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => Ok(QuadIrr::from_integer(cur.natural()?)),
        Some('(') => {
            cur.bump();
            let v = expr(cur)?;
            cur.expect(')')?;
            Ok(v)
        }
        Some('s') => {
            if !cur.eat_word("sqrt") {
                return Err(cur.error("'sqrt'"));
            }
            cur.expect('(')?;
            let at = cur.position();
            let arg = expr(cur)?;
            cur.expect(')')?;
            let radicand = arg
                .to_rational()
                .filter(|x| !x.is_negative())
                .ok_or_else(|| Error::parse(at, "non-negative rational radicand"))?;
            QuadIrr::sqrt_rational(&radicand)
        }
        _ => Err(cur.error("integer, 'sqrt' or '('")),
    }
}

/// Parses `[a0; a1, …, (b1, …)]` and returns its canonical form.
pub fn parse_cf(src: &str) -> Result<ContinuedFraction> {
    let mut cur = Cursor::new(src);
    cur.expect('[')?;
    let mut preperiod = vec![cur.integer()?];
    let mut period = Vec::new();
    if cur.eat(';') || cur.eat(',') {
        loop {
            if cur.eat('(') {
                period.push(cur.integer()?);
                while cur.eat(',') {
                    period.push(cur.integer()?);
                }
                cur.expect(')')?;
                break;
            }
            preperiod.push(cur.integer()?);
            if !cur.eat(',') {
                break;
            }
        }
    }
    cur.expect(']')?;
    cur.finish()?;
    ContinuedFraction::new(preperiod, period)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(p: i64, q: i64, r: i64, d: i64) -> QuadIrr {
        QuadIrr::new(p, q, r, d).unwrap()
    }

    #[test]
    fn value_syntax() {
        assert_eq!(parse_value("7/3").unwrap(), qi(7, 0, 3, 0));
        assert_eq!(parse_value("sqrt(2)").unwrap(), qi(0, 1, 1, 2));
        assert_eq!(parse_value("(1 + 1*sqrt(5)) / 2").unwrap(), qi(1, 1, 2, 5));
        assert_eq!(parse_value("(3+2*sqrt(7))/5").unwrap(), qi(3, 2, 5, 7));
        assert_eq!(parse_value("-3*sqrt(2)/2").unwrap(), qi(0, -3, 2, 2));
        assert_eq!(parse_value("1/sqrt(2)").unwrap(), qi(0, 1, 2, 2));
        assert_eq!(parse_value("sqrt(8)").unwrap(), qi(0, 2, 1, 2));
        assert_eq!(parse_value("sqrt(1/2)").unwrap(), qi(0, 1, 2, 2));
        assert_eq!(parse_value(" - 5 ").unwrap(), QuadIrr::from_integer(-5));
    }

    #[test]
    fn display_round_trips() {
        for s in ["7/3", "sqrt(2)", "(1+sqrt(5))/2", "-3*sqrt(2)/2", "(-1-sqrt(5))/2", "1+sqrt(2)", "-4"] {
            assert_eq!(parse_value(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn value_errors_report_position() {
        assert_eq!(
            parse_value("1 + "),
            Err(Error::Parse { position: 4, expected: "integer, 'sqrt' or '('".into() })
        );
        assert_eq!(
            parse_value("(1+sqrt(2)"),
            Err(Error::Parse { position: 10, expected: "')'".into() })
        );
        assert!(matches!(parse_value("sqrt(-2)"), Err(Error::Parse { position: 5, .. })));
        assert!(matches!(parse_value("1/0"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_value("2)"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_value("sqrt(2)+sqrt(3)"), Err(Error::MixedRadicand(..))));
    }

    #[test]
    fn cf_syntax() {
        assert_eq!(parse_cf("[1; (2)]").unwrap().value(), qi(0, 1, 1, 2));
        assert_eq!(parse_cf("[2; 3]").unwrap().value(), qi(7, 0, 3, 0));
        assert_eq!(parse_cf("[ 0 ; ( 1 ) ]").unwrap().value(), qi(-1, 1, 2, 5));
        assert_eq!(parse_cf("[5]").unwrap().value(), QuadIrr::from_integer(5));
        assert_eq!(parse_cf("[-1; 2, 3, (4, 5)]").unwrap().to_string(), "[-1; 2, 3, (4, 5)]");
        assert!(matches!(parse_cf("[1; (2]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_cf("1; 2]"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_cf("[1; 0]"), Err(Error::InvalidQuotient(_))));
    }
}
