//! Textual descriptions of subsets of the line as finite unions of
//! `interval ∩ carrier` blocks.

mod block;
pub mod enumerate;
mod frame;
mod normalize;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use block::{Block, Carrier, Membership, Undecided, TIGHTEN_DEPTH};
pub use enumerate::{rationals_signed, RationalStream, RoundRobin, SternBrocot};
pub use frame::{CantorFrame, FrameGap, FrameGaps, Location, Side};
pub use normalize::{first_overlap, normalize_blocks};
pub use parse::parse_blocks;


use crate::exactnum::{Quad, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("syntax error at offset {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("carrier ratio {ratio} at offset {position} must lie strictly between 0 and 1/2")]
    RatioOutOfRange { position: usize, ratio: Rational },
    #[error("invalid block at offset {position}: {reason}")]
    InvalidBlock { position: usize, reason: String },
    #[error("blocks {0} and {1} overlap with incomparable carriers")]
    UnresolvedOverlap(String, String),
    #[error("carrier of block {0} is uncountable")]
    Uncountable(String),
    #[error("the set is empty")]
    Empty,
}

/// A normalized finite union of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetExpr {
    blocks: Vec<Block>,
}

/// An extended-real bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub inf: Extended,
    pub inf_attained: bool,
    pub sup: Extended,
    pub sup_attained: bool,
}

impl SetExpr {
    /// Normalizes `blocks`; rejects overlaps normalization cannot resolve.
    pub fn from_blocks(blocks: Vec<Block>) -> Result<Self, SetError> {
        let blocks = normalize_blocks(&blocks);
        if let Some((i, j)) = first_overlap(&blocks) {
            return Err(SetError::UnresolvedOverlap(
                blocks[i].to_string(),
                blocks[j].to_string(),
            ));
        }
        Ok(SetExpr { blocks })
    }

    pub fn parse(text: &str) -> Result<Self, SetError> {
        Self::from_blocks(parse_blocks(text)?)
    }

    pub fn empty() -> Self {
        SetExpr { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn normalize(&self) -> SetExpr {
        SetExpr {
            blocks: normalize_blocks(&self.blocks),
        }
    }

    pub fn contains(&self, x: &Rational, depth: usize) -> Membership {
        self.contains_quad(&Quad::from(x), depth)
    }

    pub fn contains_quad(&self, x: &Quad, depth: usize) -> Membership {
        let mut unknown = false;
        for b in &self.blocks {
            match b.contains(x, depth) {
                Membership::In => return Membership::In,
                Membership::UnknownAtDepth => unknown = true,
                Membership::Out => {}
            }
        }
        if unknown {
            Membership::UnknownAtDepth
        } else {
            Membership::Out
        }
    }

    pub fn is_countable(&self) -> bool {
        self.blocks.iter().all(Block::is_countable)
    }

    /// Canonical injective enumeration: each block's own order, interleaved
    /// round-robin.
    pub fn enumerate(&self) -> Result<RoundRobin, SetError> {
        let mut streams = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            match enumerate::block_stream(b) {
                Some(s) => streams.push(s),
                None => return Err(SetError::Uncountable(b.to_string())),
            }
        }
        Ok(RoundRobin::new(streams))
    }

    pub fn bounds(&self) -> Result<Bounds, SetError> {
        let first = self.blocks.first().ok_or(SetError::Empty)?;
        let last = self.blocks.last().ok_or(SetError::Empty)?;
        let (inf, inf_attained) = match first.inf() {
            Some((r, att)) => (Extended::Finite(r), att),
            None => (Extended::NegInf, false),
        };
        let (sup, sup_attained) = match last.sup() {
            Some((r, att)) => (Extended::Finite(r), att),
            None => (Extended::PosInf, false),
        };
        Ok(Bounds {
            inf,
            inf_attained,
            sup,
            sup_attained,
        })
    }
}

impl FromStr for SetExpr {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, SetError> {
        SetExpr::parse(s)
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("{}");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn set(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    #[test]
    fn named_cantor_set() {
        let c = set("C");
        assert_eq!(c.blocks().len(), 1);
        assert_eq!(c.blocks()[0].carrier, Carrier::Cantor(CantorFrame::middle_thirds()));
    }

    #[test]
    fn bad_ratio_rejected() {
        assert!(matches!(
            SetExpr::parse("[0,1]&cantor(3/5)"),
            Err(SetError::RatioOutOfRange { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(set("C").contains(&rat(1, 4), 1), Membership::In);
        assert_eq!(set("C").contains(&rat(1, 2), 1), Membership::Out);
        assert_eq!(set("[0,1]&Q").contains(&rat(1, 3), 1), Membership::In);
    }

    #[test]
    fn enumerate_examples() {
        let pts: Vec<Rational> = set("{1,2,3}").enumerate().unwrap().collect();
        assert_eq!(pts, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        let e: Vec<Rational> = set("E").enumerate().unwrap().take(8).collect();
        assert_eq!(
            e,
            vec![rat(0, 1), rat(1, 1), rat(1, 3), rat(2, 3), rat(1, 9), rat(2, 9), rat(7, 9), rat(8, 9)]
        );
        assert!(matches!(set("C").enumerate(), Err(SetError::Uncountable(_))));
    }

    #[test]
    fn bounds_examples() {
        let x = set("[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,+inf)");
        let b = x.bounds().unwrap();
        assert_eq!(b.inf, Extended::Finite(rat(0, 1)));
        assert!(b.inf_attained);
        assert_eq!(b.sup, Extended::PosInf);
        let c = set("C").bounds().unwrap();
        assert!(c.inf_attained && c.sup_attained);
        let q = set("(0,1)&Q").bounds().unwrap();
        assert!(!q.inf_attained && !q.sup_attained);
        assert_eq!(SetExpr::empty().bounds(), Err(SetError::Empty));
    }

    #[test]
    fn display_roundtrips() {
        for s in ["C", "E", "[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,+inf)", "(0,1)&D", "{0} u {1}", "{}", "(1/2,2/3)&Z"] {
            let x = set(s);
            assert_eq!(set(&x.to_string()), x, "{s}");
        }
    }
}
