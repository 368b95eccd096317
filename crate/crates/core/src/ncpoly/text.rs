//! Plain-text polynomial format.
//!
//! Terms are joined by ` + ` / ` - `; a term is an optional coefficient
//! (`a` or `a/b`) followed by letters with optional caret powers, e.g.
//! `3*X^2*Y^2*X + 1/2*X*Y^4*X`. The `*` separators are optional on input.
//! Unit coefficients are omitted on output and the zero polynomial prints
//! as `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polynomial::Polynomial;
use super::word::{Letter, Word};
use crate::error::{Error, Result};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if w.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{a}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse as BigInt"))
    }

    /// One term without its sign: a product of numeric and letter factors.
    fn term(&mut self) -> Result<(BigRational, Word)> {
        let mut coeff = BigRational::one();
        let mut word = Word::empty();
        let mut factors = 0usize;
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let num = self.integer()?;
                    let den = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.integer()?
                    } else {
                        BigInt::one()
                    };
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    coeff *= BigRational::new(num, den);
                }
                Some(b @ (b'X' | b'Y')) => {
                    self.pos += 1;
                    let letter = if b == b'X' { Letter::X } else { Letter::Y };
                    let power = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let n = self.integer()?;
                        usize::try_from(n).or_else(|_| self.err("power out of range"))?
                    } else {
                        1
                    };
                    for _ in 0..power {
                        word.push(letter);
                    }
                }
                _ => {
                    if factors == 0 {
                        return self.err("expected a coefficient or a letter");
                    }
                    return Ok((coeff, word));
                }
            }
            factors += 1;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { src: s.as_bytes(), pos: 0 };
        let mut out = Polynomial::zero();
        let mut sign = match cur.peek() {
            Some(b'-') => {
                cur.pos += 1;
                -1
            }
            Some(b'+') => {
                cur.pos += 1;
                1
            }
            None => return cur.err("empty input"),
            _ => 1,
        };
        loop {
            let (c, w) = cur.term()?;
            out.add_term(w, if sign < 0 { -c } else { c });
            sign = match cur.peek() {
                None => break,
                Some(b'+') => 1,
                Some(b'-') => -1,
                Some(_) => return cur.err("expected '+' or '-'"),
            };
            cur.pos += 1;
        }
        Ok(out)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts the same letter syntax as polynomials (`X^2*Y`, `XXY`, `1`).
    fn from_str(s: &str) -> Result<Self> {
        let p: Polynomial = s.parse()?;
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((w, c)), None) if c.is_one() => Ok(w.clone()),
            _ => Err(Error::Parse { pos: 0, msg: format!("{s:?} is not a single word") }),
        }
    }
}
