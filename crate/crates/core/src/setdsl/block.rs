use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::frame::{CantorFrame, Location, Side};
use crate::exactnum::{ternary_expansion, ternary_expansion_alt, Quad, Rational};

/// The set a block's interval is intersected with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Carrier {
    Reals,
    Rationals,
    Dyadics,
    Integers,
    /// Cantor set on the frame.
    Cantor(CantorFrame),
    /// Endpoints of the deleted intervals of the frame's Cantor set, plus
    /// the frame endpoints.
    CantorEnds(CantorFrame),
    FinitePoints(Vec<Rational>),
}

impl Carrier {
    pub fn is_countable(&self) -> bool {
        !matches!(self, Carrier::Reals | Carrier::Cantor(_))
    }

    pub fn frame(&self) -> Option<&CantorFrame> {
        match self {
            Carrier::Cantor(f) | Carrier::CantorEnds(f) => Some(f),
            _ => None,
        }
    }

    fn global_rank(&self) -> Option<u8> {
        match self {
            Carrier::Integers => Some(0),
            Carrier::Dyadics => Some(1),
            Carrier::Rationals => Some(2),
            Carrier::Reals => Some(3),
            _ => None,
        }
    }

    /// `Some(Greater)` when `self` contains `other` as subsets of the line,
    /// `Some(Less)` for the converse, `None` when incomparable or unknown.
    pub(crate) fn compare_inclusion(&self, other: &Carrier) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        if let (Some(a), Some(b)) = (self.global_rank(), other.global_rank()) {
            return Some(a.cmp(&b));
        }
        let includes = |big: &Carrier, small: &Carrier| match (big, small) {
            (Carrier::Reals, _) => true,
            (Carrier::Rationals, Carrier::CantorEnds(_)) => true,
            (Carrier::Cantor(f), Carrier::CantorEnds(g)) => f == g,
            _ => false,
        };
        if includes(self, other) {
            Some(Ordering::Greater)
        } else if includes(other, self) {
            Some(Ordering::Less)
        } else {
            None
        }
    }

}

/// Tri-state membership answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Membership {
    In,
    Out,
    UnknownAtDepth,
}

/// `interval ∩ carrier`. `None` bounds are infinite (and open).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub carrier: Carrier,
}

/// A Cantor-type bound could not be resolved by bounded descent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Undecided(pub Rational);

/// Stage limit used when tightening Cantor bounds for ratios other than 1/3.
pub const TIGHTEN_DEPTH: usize = 512;

pub(crate) fn is_dyadic(x: &Rational) -> bool {
    let d = x.denom();
    d.is_one() || (d & (d - BigInt::one())).is_zero()
}

pub(crate) fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

fn is_power_of_three(d: &BigInt) -> bool {
    let three = BigInt::from(3);
    let mut d = d.clone();
    while (&d % &three).is_zero() {
        d /= &three;
    }
    d.is_one()
}

impl Block {
    pub fn new(
        lo: Option<Rational>,
        hi: Option<Rational>,
        lo_closed: bool,
        hi_closed: bool,
        carrier: Carrier,
    ) -> Self {
        Block {
            lo_closed: lo_closed && lo.is_some(),
            hi_closed: hi_closed && hi.is_some(),
            lo,
            hi,
            carrier,
        }
    }

    pub fn closed(lo: Rational, hi: Rational, carrier: Carrier) -> Self {
        Block::new(Some(lo), Some(hi), true, true, carrier)
    }

    pub fn point(p: Rational) -> Self {
        Block::new(
            Some(p.clone()),
            Some(p.clone()),
            true,
            true,
            Carrier::FinitePoints(vec![p]),
        )
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    /// Nonempty interior of the interval, i.e. `lo < hi`.
    pub fn has_interior(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn is_countable(&self) -> bool {
        self.carrier.is_countable() || !self.has_interior()
    }

    pub fn interval_contains(&self, x: &Quad) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) => {
                let lo = Quad::from(lo);
                if self.lo_closed {
                    *x >= lo
                } else {
                    *x > lo
                }
            }
        };
        let below = match &self.hi {
            None => true,
            Some(hi) => {
                let hi = Quad::from(hi);
                if self.hi_closed {
                    *x <= hi
                } else {
                    *x < hi
                }
            }
        };
        above && below
    }

    /// Strictly between the bounds.
    pub(crate) fn interior_contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| x > lo) && self.hi.as_ref().is_none_or(|hi| x < hi)
    }

    pub fn contains(&self, x: &Quad, depth: usize) -> Membership {
        if !self.interval_contains(x) {
            return Membership::Out;
        }
        let yes = |b: bool| if b { Membership::In } else { Membership::Out };
        match &self.carrier {
            Carrier::Reals => Membership::In,
            Carrier::Rationals => yes(x.is_rational()),
            Carrier::Dyadics => yes(x.as_rational().is_some_and(is_dyadic)),
            Carrier::Integers => yes(x.as_rational().is_some_and(is_integer)),
            Carrier::FinitePoints(ps) => yes(x.as_rational().is_some_and(|r| ps.contains(r))),
            Carrier::Cantor(frame) => {
                if let (true, Some(r)) = (frame.is_middle_thirds_ratio(), x.as_rational()) {
                    return yes(in_middle_thirds(frame, r));
                }
                match frame.locate(x, depth) {
                    Location::Outside | Location::InGap(_) => Membership::Out,
                    Location::Unknown => Membership::UnknownAtDepth,
                    _ => Membership::In,
                }
            }
            Carrier::CantorEnds(frame) => {
                let Some(r) = x.as_rational() else {
                    return Membership::Out;
                };
                if frame.is_middle_thirds_ratio() {
                    let t = relative(frame, r);
                    return yes(is_power_of_three(t.denom()) && in_middle_thirds(frame, r));
                }
                match frame.locate(x, depth) {
                    Location::FrameEndpoint(_) | Location::GapEndpoint(..) => Membership::In,
                    Location::Unknown => Membership::UnknownAtDepth,
                    _ => Membership::Out,
                }
            }
        }
    }

    /// Infimum of the block's set with attainment, `None` for `-inf`.
    pub fn inf(&self) -> Option<(Rational, bool)> {
        self.lo.clone().map(|l| (l, self.lo_closed))
    }

    pub fn sup(&self) -> Option<(Rational, bool)> {
        self.hi.clone().map(|h| (h, self.hi_closed))
    }

    /// Rewrites the bounds so that `lo`/`hi` are the exact infimum/supremum
    /// of the block's set and the closed flags record attainment. Returns
    /// `Ok(None)` for an empty block.
    pub fn tighten(mut self) -> Result<Option<Block>, Undecided> {
        if let (Some(a), Some(b)) = (&self.lo, &self.hi) {
            if a > b || (a == b && !(self.lo_closed && self.hi_closed)) {
                return Ok(None);
            }
        }
        match self.carrier.clone() {
            Carrier::Reals | Carrier::Rationals => {}
            Carrier::Dyadics => {
                if self.lo.as_ref().is_some_and(|l| !is_dyadic(l)) {
                    self.lo_closed = false;
                }
                if self.hi.as_ref().is_some_and(|h| !is_dyadic(h)) {
                    self.hi_closed = false;
                }
            }
            Carrier::Integers => {
                if let Some(l) = &self.lo {
                    let mut c = l.ceil();
                    if c == *l && !self.lo_closed {
                        c += Rational::one();
                    }
                    self.lo = Some(c);
                    self.lo_closed = true;
                }
                if let Some(h) = &self.hi {
                    let mut f = h.floor();
                    if f == *h && !self.hi_closed {
                        f -= Rational::one();
                    }
                    self.hi = Some(f);
                    self.hi_closed = true;
                }
            }
            Carrier::FinitePoints(ps) => {
                let kept: Vec<Rational> = ps
                    .into_iter()
                    .filter(|p| self.interval_contains(&Quad::from(p)))
                    .collect();
                let (Some(min), Some(max)) = (kept.iter().min(), kept.iter().max()) else {
                    return Ok(None);
                };
                self.lo = Some(min.clone());
                self.hi = Some(max.clone());
                self.lo_closed = true;
                self.hi_closed = true;
                self.carrier = Carrier::FinitePoints(kept);
            }
            Carrier::Cantor(frame) | Carrier::CantorEnds(frame) => {
                let ends_only = matches!(self.carrier, Carrier::CantorEnds(_));
                let lo = self.lo.clone().unwrap_or_else(|| frame.lo.clone());
                let hi = self.hi.clone().unwrap_or_else(|| frame.hi.clone());
                let (lo, lo_closed) =
                    tighten_cantor_bound(&frame, lo, self.lo_closed, Side::Left, ends_only)?;
                let (hi, hi_closed) =
                    tighten_cantor_bound(&frame, hi, self.hi_closed, Side::Right, ends_only)?;
                self.lo = Some(lo);
                self.hi = Some(hi);
                self.lo_closed = lo_closed;
                self.hi_closed = hi_closed;
            }
        }
        if let (Some(a), Some(b)) = (&self.lo, &self.hi) {
            match a.cmp(b) {
                Ordering::Greater => return Ok(None),
                Ordering::Equal => {
                    if !(self.lo_closed && self.hi_closed) {
                        return Ok(None);
                    }
                    if self.contains(&Quad::from(a), TIGHTEN_DEPTH) != Membership::In {
                        return Ok(None);
                    }
                    return Ok(Some(Block::point(a.clone())));
                }
                Ordering::Less => {}
            }
        }
        Ok(Some(self))
    }

    pub(crate) fn with_bounds(
        &self,
        lo: Option<Rational>,
        lo_closed: bool,
        hi: Option<Rational>,
        hi_closed: bool,
    ) -> Block {
        Block::new(lo, hi, lo_closed, hi_closed, self.carrier.clone())
    }
}

fn relative(frame: &CantorFrame, x: &Rational) -> Rational {
    (x - &frame.lo) / (&frame.hi - &frame.lo)
}

/// Membership in the middle-thirds set of a frame by ternary digit scan.
fn in_middle_thirds(frame: &CantorFrame, x: &Rational) -> bool {
    let t = relative(frame, x);
    let Ok(exp) = ternary_expansion(&t) else {
        return false;
    };
    exp.avoids_one()
        || ternary_expansion_alt(&t)
            .ok()
            .flatten()
            .is_some_and(|alt| alt.avoids_one())
}

/// Moves a bound of a Cantor-type block onto the set: `side` says whether
/// this is the lower (`Left`) or upper (`Right`) bound.
fn tighten_cantor_bound(
    frame: &CantorFrame,
    x: Rational,
    closed: bool,
    side: Side,
    ends_only: bool,
) -> Result<(Rational, bool), Undecided> {
    use Side::{Left, Right};
    let loc = frame.locate(&Quad::from(&x), TIGHTEN_DEPTH);
    Ok(match (loc, side) {
        (Location::Outside, Left) if x < frame.lo => (frame.lo.clone(), true),
        (Location::Outside, Right) if x > frame.hi => (frame.hi.clone(), true),
        // Bound beyond the opposite end: the block is empty.
        (Location::Outside, Left) => (frame.hi.clone(), false),
        (Location::Outside, Right) => (frame.lo.clone(), false),
        (Location::FrameEndpoint(_), _) => (x, closed),
        (Location::InGap(g), Left) => (g.hi, true),
        (Location::InGap(g), Right) => (g.lo, true),
        (Location::GapEndpoint(g, Left), Left) if !closed => (g.hi, true),
        (Location::GapEndpoint(g, Right), Right) if !closed => (g.lo, true),
        (Location::GapEndpoint(..), _) => (x, closed),
        (Location::Interior, _) => (x, closed && !ends_only),
        (Location::Unknown, _) => return Err(Undecided(x)),
    })
}

fn fmt_bound_lo(b: &Block, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &b.lo {
        None => write!(f, "(-inf"),
        Some(l) => write!(f, "{}{}", if b.lo_closed { '[' } else { '(' }, l),
    }
}

fn fmt_bound_hi(b: &Block, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &b.hi {
        None => write!(f, "+inf)"),
        Some(h) => write!(f, "{}{}", h, if b.hi_closed { ']' } else { ')' }),
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Reals => write!(f, "R"),
            Carrier::Rationals => write!(f, "Q"),
            Carrier::Dyadics => write!(f, "D"),
            Carrier::Integers => write!(f, "Z"),
            Carrier::Cantor(fr) => write!(f, "cantor({})", fr.ratio),
            Carrier::CantorEnds(fr) => write!(f, "ends({})", fr.ratio),
            Carrier::FinitePoints(ps) => {
                let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
        }
    }
}

impl fmt::Display for Block {
    /// DSL syntax; Cantor carriers whose frame differs from the interval get
    /// an `@[a,b]` frame suffix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Carrier::FinitePoints(_) = self.carrier {
            return write!(f, "{}", self.carrier);
        }
        fmt_bound_lo(self, f)?;
        write!(f, ",")?;
        fmt_bound_hi(self, f)?;
        match &self.carrier {
            Carrier::Reals => Ok(()),
            c => {
                write!(f, "&{c}")?;
                if let Some(fr) = c.frame() {
                    if self.lo.as_ref() != Some(&fr.lo) || self.hi.as_ref() != Some(&fr.hi) {
                        write!(f, "@[{},{}]", fr.lo, fr.hi)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// `gcd`-free helper used by the enumerators.
pub(crate) fn coprime(p: &BigInt, q: &BigInt) -> bool {
    p.gcd(q).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn c() -> Block {
        Block::closed(
            rat(0, 1),
            rat(1, 1),
            Carrier::Cantor(CantorFrame::middle_thirds()),
        )
    }

    #[test]
    fn cantor_membership_by_digits() {
        assert_eq!(c().contains(&rat(1, 4).into(), 1), Membership::In);
        assert_eq!(c().contains(&rat(1, 2).into(), 1), Membership::Out);
        assert_eq!(c().contains(&rat(1, 3).into(), 1), Membership::In);
        assert_eq!(c().contains(&rat(3, 4).into(), 1), Membership::In);
    }

    #[test]
    fn ends_membership() {
        let e = Block::closed(
            rat(0, 1),
            rat(1, 1),
            Carrier::CantorEnds(CantorFrame::middle_thirds()),
        );
        assert_eq!(e.contains(&rat(2, 9).into(), 1), Membership::In);
        assert_eq!(e.contains(&rat(1, 4).into(), 1), Membership::Out);
        assert_eq!(e.contains(&rat(4, 9).into(), 1), Membership::Out);
    }

    #[test]
    fn general_ratio_uses_descent() {
        let f = CantorFrame::new(rat(2, 5), rat(0, 1), rat(1, 1));
        let b = Block::closed(rat(0, 1), rat(1, 1), Carrier::Cantor(f));
        assert_eq!(b.contains(&rat(1, 2).into(), 4), Membership::Out);
        assert_eq!(b.contains(&rat(2, 5).into(), 4), Membership::In);
        // 2/5 * 2/5 = 4/25 is the left end of a second-generation gap.
        assert_eq!(b.contains(&rat(4, 25).into(), 4), Membership::In);
    }

    #[test]
    fn tightening_moves_bounds_onto_the_set() {
        let d = Block::closed(rat(0, 1), rat(1, 3), Carrier::Dyadics)
            .tighten()
            .unwrap()
            .unwrap();
        assert!(d.lo_closed && !d.hi_closed);
        let z = Block::new(Some(rat(7, 2)), None, true, false, Carrier::Integers)
            .tighten()
            .unwrap()
            .unwrap();
        assert_eq!(z.lo, Some(rat(4, 1)));
        let trimmed = c()
            .with_bounds(Some(rat(0, 1)), true, Some(rat(1, 2)), true)
            .tighten()
            .unwrap()
            .unwrap();
        assert_eq!((trimmed.hi, trimmed.hi_closed), (Some(rat(1, 3)), true));
        let point = c()
            .with_bounds(Some(rat(1, 3)), true, Some(rat(1, 2)), false)
            .tighten()
            .unwrap()
            .unwrap();
        assert_eq!(point, Block::point(rat(1, 3)));
        assert!(c()
            .with_bounds(Some(rat(2, 5)), true, Some(rat(1, 2)), true)
            .tighten()
            .unwrap()
            .is_none());
    }

    #[test]
    fn display_round_trips_common_forms() {
        assert_eq!(c().to_string(), "[0,1]&cantor(1/3)");
        let q = Block::new(Some(rat(0, 1)), None, false, false, Carrier::Rationals);
        assert_eq!(q.to_string(), "(0,+inf)&Q");
        assert_eq!(Block::point(rat(2, 1)).to_string(), "{2}");
    }
}
