//! Text grammar for scalars:
//!
//! ```text
//! scalar := rat | rat SIGN [uint ['/' uint]] 'i' | [SIGN] [uint ['/' uint]] 'i'
//! rat    := [SIGN] uint ['/' uint]
//! ```
//!
//! No whitespace and no decimal points. Every string produced by the
//! `Display` impls parses back to the same value.

use std::str::FromStr;

use num_bigint::BigInt;

use super::{GaussianRational, Rational};
use crate::error::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).ok()?;
        s.parse().ok()
    }

    /// Unsigned magnitude `uint ['/' uint]`, or `None` if no digits are present.
    fn magnitude(&mut self) -> Result<Option<Rational>> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.peek() != Some(b'/') {
            return Ok(Some(Rational::from_integer(num)));
        }
        self.pos += 1;
        let den_pos = self.pos;
        let den = self.digits().ok_or_else(|| self.err("expected denominator digits"))?;
        Rational::new(num, den).map(Some).map_err(|_| Error::InvalidScalar(format!("zero denominator at position {den_pos}")))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut c = Cursor { bytes: s.as_bytes(), pos: 0 };
    let neg = c.sign().unwrap_or(false);
    let mag = c.magnitude()?.ok_or_else(|| c.err("expected digits"))?;
    if c.pos != c.bytes.len() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(if neg { -mag } else { mag })
}

pub fn parse_scalar(s: &str) -> Result<GaussianRational> {
    let mut c = Cursor { bytes: s.as_bytes(), pos: 0 };
    if s.is_empty() {
        return Err(c.err("empty input"));
    }
    let neg = c.sign().unwrap_or(false);
    let first = c.magnitude()?;
    let signed = |neg: bool, r: Rational| if neg { -r } else { r };

    match c.peek() {
        // Pure imaginary: [SIGN] [mag] 'i'
        Some(b'i') => {
            c.pos += 1;
            if c.pos != c.bytes.len() {
                return Err(c.err("unexpected trailing input"));
            }
            let im = signed(neg, first.unwrap_or_else(Rational::one));
            return Ok(GaussianRational::new(Rational::zero(), im));
        }
        None => {
            let re = first.ok_or_else(|| c.err("expected digits or 'i'"))?;
            return Ok(GaussianRational::real(signed(neg, re)));
        }
        _ => {}
    }

    let re = signed(neg, first.ok_or_else(|| c.err("expected digits or 'i'"))?);
    let im_neg = c.sign().ok_or_else(|| c.err("expected '+' or '-'"))?;
    let im_mag = c.magnitude()?.unwrap_or_else(Rational::one);
    if c.peek() != Some(b'i') {
        return Err(c.err("expected 'i'"));
    }
    c.pos += 1;
    if c.pos != c.bytes.len() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(GaussianRational::new(re, signed(im_neg, im_mag)))
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_scalar("3/2+5/7i").unwrap(), GaussianRational::new(q(3, 2), q(5, 7)));
        assert_eq!(parse_scalar("-2").unwrap(), GaussianRational::real(q(-2, 1)));
        assert_eq!(parse_scalar("i").unwrap(), GaussianRational::i());
        assert_eq!(parse_scalar("-i").unwrap(), -GaussianRational::i());
        assert_eq!(parse_scalar("+3i").unwrap(), GaussianRational::new(q(0, 1), q(3, 1)));
        assert_eq!(parse_scalar("1-i").unwrap(), GaussianRational::new(q(1, 1), q(-1, 1)));
        assert_eq!(parse_scalar("6/4").unwrap(), GaussianRational::real(q(3, 2)));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "+", "1.5", "1 + i", "1/", "/2", "1+2", "ii", "1+2ij", "1i+2", "abc", "--1"] {
            let err = parse_scalar(bad).unwrap_err();
            assert_eq!(err.code(), "ParseError", "{bad:?} gave {err:?}");
        }
    }

    #[test]
    fn reports_position() {
        match parse_scalar("12x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_denominator_is_invalid_scalar() {
        assert_eq!(parse_scalar("1/0").unwrap_err().code(), "InvalidScalar");
        assert_eq!(parse_scalar("1+1/0i").unwrap_err().code(), "InvalidScalar");
    }
}
