//! Recursive-descent parser for the set description language:
//!
//! ```text
//! expr     := term { "u" term }
//! term     := interval [ "&" carrier ] | pointset | named
//! interval := ("(" | "[") bound "," bound (")" | "]")
//! bound    := rational | "-inf" | "+inf"
//! pointset := "{" [ rational { "," rational } ] "}"
//! carrier  := "Q" | "R" | "D" | "Z" | cantor [ frame ] | ends [ frame ]
//! cantor   := "cantor" "(" rational ")"
//! ends     := "ends" "(" rational ")"
//! frame    := "@" "[" rational "," rational "]"
//! named    := "C" | "E" | "Q" | "D" | "Z"
//! rational := ["-"] digits [ "/" digits ]
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::block::{Block, Carrier};
use super::frame::CantorFrame;
use super::SetError;
use crate::exactnum::{rat, Rational};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn syntax(&mut self, expected: &str) -> SetError {
        let found = self.found();
        SetError::Syntax {
            position: self.pos,
            expected: expected.into(),
            found,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SetError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{c}`")))
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, SetError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if len == 0 {
            return Err(self.syntax("digits"));
        }
        self.pos += len;
        Ok(self.src[start..start + len].parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational, SetError> {
        let neg = self.eat('-');
        let num = self.digits()?;
        let den = if self.eat('/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(SetError::Syntax {
                    position: at,
                    expected: "nonzero denominator".into(),
                    found: "0".into(),
                });
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    /// `None` for an infinite bound; the flag says which infinity.
    fn bound(&mut self) -> Result<Result<Rational, bool>, SetError> {
        if self.eat_word("-inf") {
            return Ok(Err(false));
        }
        if self.eat_word("+inf") {
            return Ok(Err(true));
        }
        self.rational().map(Ok)
    }

    fn ratio_arg(&mut self) -> Result<Rational, SetError> {
        self.expect('(')?;
        let at = {
            self.skip_ws();
            self.pos
        };
        let r = self.rational()?;
        self.expect(')')?;
        if !CantorFrame::ratio_is_valid(&r) {
            return Err(SetError::RatioOutOfRange {
                position: at,
                ratio: r,
            });
        }
        Ok(r)
    }

    /// `None` for the empty point set `{}`.
    fn term(&mut self) -> Result<Option<Block>, SetError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let block = match self.peek() {
            Some('(' | '[') => self.interval_term(start),
            Some('{') => {
                self.pos += 1;
                if self.eat('}') {
                    return Ok(None);
                }
                let mut points = vec![self.rational()?];
                while self.eat(',') {
                    points.push(self.rational()?);
                }
                self.expect('}')?;
                let lo = points.iter().min().cloned();
                let hi = points.iter().max().cloned();
                Ok(Block::new(lo, hi, true, true, Carrier::FinitePoints(points)))
            }
            Some('C') => {
                self.pos += 1;
                Ok(unit_frame(Carrier::Cantor(CantorFrame::middle_thirds())))
            }
            Some('E') => {
                self.pos += 1;
                Ok(unit_frame(Carrier::CantorEnds(CantorFrame::middle_thirds())))
            }
            Some(c @ ('Q' | 'D' | 'Z' | 'R')) => {
                self.pos += 1;
                let carrier = match c {
                    'Q' => Carrier::Rationals,
                    'D' => Carrier::Dyadics,
                    'Z' => Carrier::Integers,
                    _ => Carrier::Reals,
                };
                Ok(Block::new(None, None, false, false, carrier))
            }
            _ => Err(self.syntax("interval, point set or one of C, E, Q, D, Z")),
        };
        block.map(Some)
    }

    fn interval_term(&mut self, start: usize) -> Result<Block, SetError> {
        let lo_closed = self.eat('[');
        if !lo_closed {
            self.expect('(')?;
        }
        let lo = self.bound()?;
        self.expect(',')?;
        let hi = self.bound()?;
        let hi_closed = if self.eat(']') {
            true
        } else {
            self.expect(')')?;
            false
        };
        let invalid = |reason: &str| SetError::InvalidBlock {
            position: start,
            reason: reason.into(),
        };
        let lo = match lo {
            Ok(r) => Some(r),
            Err(false) if !lo_closed => None,
            Err(false) => return Err(invalid("infinite bounds must be open")),
            Err(true) => return Err(invalid("lower bound cannot be +inf")),
        };
        let hi = match hi {
            Ok(r) => Some(r),
            Err(true) if !hi_closed => None,
            Err(true) => return Err(invalid("infinite bounds must be open")),
            Err(false) => return Err(invalid("upper bound cannot be -inf")),
        };
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a > b || (a == b && !(lo_closed && hi_closed)) {
                return Err(invalid("empty interval"));
            }
        }
        let carrier = if self.eat('&') {
            self.carrier(&lo, &hi, start)?
        } else {
            Carrier::Reals
        };
        Ok(Block::new(lo, hi, lo_closed, hi_closed, carrier))
    }

    fn carrier(
        &mut self,
        lo: &Option<Rational>,
        hi: &Option<Rational>,
        start: usize,
    ) -> Result<Carrier, SetError> {
        let framed = |make: fn(CantorFrame) -> Carrier, ratio: Rational| match (lo, hi) {
            (Some(a), Some(b)) if a < b => Ok(make(CantorFrame::new(ratio, a.clone(), b.clone()))),
            _ => Err(SetError::InvalidBlock {
                position: start,
                reason: "Cantor carriers need a bounded interval with lo < hi".into(),
            }),
        };
        let make: Option<fn(CantorFrame) -> Carrier> = if self.eat_word("cantor") {
            Some(Carrier::Cantor)
        } else if self.eat_word("ends") {
            Some(Carrier::CantorEnds)
        } else {
            None
        };
        if let Some(make) = make {
            let r = self.ratio_arg()?;
            if self.eat('@') {
                return self.explicit_frame(make, r);
            }
            return framed(make, r);
        }
        let c = match self.peek() {
            Some('Q') => Carrier::Rationals,
            Some('R') => Carrier::Reals,
            Some('D') => Carrier::Dyadics,
            Some('Z') => Carrier::Integers,
            _ => return Err(self.syntax("carrier (Q, R, D, Z, cantor(r), ends(r))")),
        };
        self.pos += 1;
        Ok(c)
    }
}

impl Parser<'_> {
    /// `@[a,b]` frame suffix, as printed for blocks cut out of a larger frame.
    fn explicit_frame(
        &mut self,
        make: fn(CantorFrame) -> Carrier,
        ratio: Rational,
    ) -> Result<Carrier, SetError> {
        let at = self.pos;
        self.expect('[')?;
        let a = self.rational()?;
        self.expect(',')?;
        let b = self.rational()?;
        self.expect(']')?;
        if a >= b {
            return Err(SetError::InvalidBlock {
                position: at,
                reason: "frame needs lo < hi".into(),
            });
        }
        Ok(make(CantorFrame::new(ratio, a, b)))
    }
}

fn unit_frame(carrier: Carrier) -> Block {
    Block::closed(rat(0, 1), rat(1, 1), carrier)
}

/// Parses the raw (unnormalized) block list.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>, SetError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut blocks: Vec<Block> = p.term()?.into_iter().collect();
    loop {
        if p.peek().is_none() {
            return Ok(blocks);
        }
        if !p.eat('u') {
            return Err(p.syntax("`u` or end of input"));
        }
        blocks.extend(p.term()?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_union() {
        let blocks = parse_blocks("[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,+inf)").unwrap();
        assert_eq!(blocks.len(), 5);
        assert_eq!(blocks[0].carrier, Carrier::Rationals);
        assert!(blocks[4].hi.is_none());
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_blocks("[ 0 , 1/2 ) & D u { -1 , 3/4 }").unwrap();
        let b = parse_blocks("[0,1/2)&Du{-1,3/4}").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_position() {
        match parse_blocks("[0,1] v [2,3]") {
            Err(SetError::Syntax { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_blocks("[0,1]&cantor(3/5)"),
            Err(SetError::RatioOutOfRange { .. })
        ));
        assert!(matches!(
            parse_blocks("[0,+inf)&cantor(1/3)"),
            Err(SetError::InvalidBlock { .. })
        ));
        assert!(matches!(
            parse_blocks("[-inf,0]"),
            Err(SetError::InvalidBlock { .. })
        ));
        assert!(parse_blocks("").is_err());
    }
}
