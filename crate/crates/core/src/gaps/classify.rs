use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::ser;
use crate::exactnum::Rational;
use crate::setdsl::{Block, Carrier, SetExpr, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapKind {
    Essential,
    Dedekind,
    Pseudo,
}

/// `HalfOpenLeft` is `(a,b]`, `HalfOpenRight` is `[a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapShape {
    Open,
    Closed,
    HalfOpenLeft,
    HalfOpenRight,
    Singleton,
}

impl GapShape {
    pub fn kind(self) -> GapKind {
        match self {
            GapShape::Open => GapKind::Essential,
            GapShape::Closed | GapShape::Singleton => GapKind::Dedekind,
            GapShape::HalfOpenLeft | GapShape::HalfOpenRight => GapKind::Pseudo,
        }
    }

    /// Shape of the complement component running from `lo` to `hi`, where
    /// the flags say whether the set attains each end.
    pub fn between(lo_in_set: bool, hi_in_set: bool, degenerate: bool) -> GapShape {
        match (lo_in_set, hi_in_set) {
            _ if degenerate => GapShape::Singleton,
            (true, true) => GapShape::Open,
            (false, false) => GapShape::Closed,
            (true, false) => GapShape::HalfOpenLeft,
            (false, true) => GapShape::HalfOpenRight,
        }
    }

    pub fn contains_lo(self) -> bool {
        matches!(self, GapShape::Closed | GapShape::Singleton | GapShape::HalfOpenRight)
    }

    pub fn contains_hi(self) -> bool {
        matches!(self, GapShape::Closed | GapShape::Singleton | GapShape::HalfOpenLeft)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gap {
    #[serde(with = "ser")]
    pub lo: Rational,
    #[serde(with = "ser")]
    pub hi: Rational,
    pub shape: GapShape,
    pub kind: GapKind,
}

impl Gap {
    pub fn new(lo: Rational, hi: Rational, shape: GapShape) -> Self {
        Gap {
            lo,
            hi,
            shape,
            kind: shape.kind(),
        }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Gap::new(lo, hi, GapShape::Open)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.shape.contains_lo() { x >= &self.lo } else { x > &self.lo };
        let below = if self.shape.contains_hi() { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shape == GapShape::Singleton {
            return write!(f, "{{{}}}", self.lo);
        }
        let l = if self.shape.contains_lo() { '[' } else { '(' };
        let r = if self.shape.contains_hi() { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

/// Unbounded complement component; `side` says which end of the line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ray {
    pub side: Side,
    #[serde(with = "ser")]
    pub bound: Rational,
    pub includes_bound: bool,
}

impl Ray {
    pub fn contains(&self, x: &Rational) -> bool {
        match (self.side, self.includes_bound) {
            (Side::Left, true) => x <= &self.bound,
            (Side::Left, false) => x < &self.bound,
            (Side::Right, true) => x >= &self.bound,
            (Side::Right, false) => x > &self.bound,
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => {
                let r = if self.includes_bound { ']' } else { ')' };
                write!(f, "(-inf,{}{r}", self.bound)
            }
            Side::Right => {
                let l = if self.includes_bound { '[' } else { '(' };
                write!(f, "{l}{},+inf)", self.bound)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cardinality {
    Finite(#[serde(with = "ser::bigint")] BigInt),
    Countable,
    Uncountable,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Countable => f.write_str("countably many"),
            Cardinality::Uncountable => f.write_str("uncountably many"),
        }
    }
}

/// Infinitely (or very) many gaps inside the open interior of one block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapFamily {
    #[serde(with = "ser::block")]
    pub block: Block,
    pub kind: GapKind,
    pub cardinality: Cardinality,
    pub description: String,
}

impl GapFamily {
    /// Whether `x` lies in the family's host region, the open interior of
    /// the block's interval.
    pub fn host_contains(&self, x: &Rational) -> bool {
        self.block.lo.as_ref().is_none_or(|l| x > l) && self.block.hi.as_ref().is_none_or(|h| x < h)
    }

    /// Generation-order stream of the gaps of an essential family.
    pub fn stream(&self) -> Option<Box<dyn Iterator<Item = Gap> + Send>> {
        if self.kind != GapKind::Essential {
            return None;
        }
        let b = self.block.clone();
        match &self.block.carrier {
            Carrier::Cantor(frame) | Carrier::CantorEnds(frame) => {
                let lo = b.lo.clone()?;
                let hi = b.hi.clone()?;
                let window = (lo.clone(), hi.clone());
                Some(Box::new(
                    frame
                        .gaps(Some(window))
                        .filter(move |g| g.lo >= lo && g.hi <= hi)
                        .map(|g| Gap::open(g.lo, g.hi)),
                ))
            }
            Carrier::Integers => {
                let unit = |n: BigInt| {
                    let a = Rational::from_integer(n);
                    let b = &a + Rational::one();
                    Gap::open(a, b)
                };
                match (b.lo.clone(), b.hi.clone()) {
                    (Some(lo), hi) => {
                        let mut n = lo.to_integer();
                        Some(Box::new(std::iter::from_fn(move || {
                            let g = unit(n.clone());
                            if hi.as_ref().is_some_and(|h| g.hi > *h) {
                                return None;
                            }
                            n += 1;
                            Some(g)
                        })))
                    }
                    (None, Some(hi)) => {
                        let mut n: BigInt = hi.to_integer() - 1;
                        Some(Box::new(std::iter::from_fn(move || {
                            let g = unit(n.clone());
                            n -= 1;
                            Some(g)
                        })))
                    }
                    (None, None) => Some(Box::new((0u64..).flat_map(move |k| {
                        let k = BigInt::from(k);
                        [unit(k.clone()), unit(-k - 1)]
                    }))),
                }
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GapReport {
    pub explicit: Vec<Gap>,
    pub families: Vec<GapFamily>,
    pub rays: Vec<Ray>,
}

impl GapReport {
    pub fn pseudo_gaps(&self) -> impl Iterator<Item = &Gap> {
        self.explicit.iter().filter(|g| g.kind == GapKind::Pseudo)
    }

    pub fn count(&self, kind: GapKind) -> usize {
        self.explicit.iter().filter(|g| g.kind == kind).count()
    }
}

fn families_of(b: &Block) -> Vec<GapFamily> {
    if !b.has_interior() {
        return Vec::new();
    }
    let family = |kind, cardinality, description: &str| GapFamily {
        block: b.clone(),
        kind,
        cardinality,
        description: description.into(),
    };
    let singletons = |what: &str| {
        family(
            GapKind::Dedekind,
            Cardinality::Uncountable,
            &format!("singleton gaps at the {what} of the interior"),
        )
    };
    match &b.carrier {
        Carrier::Reals | Carrier::FinitePoints(_) => Vec::new(),
        Carrier::Rationals => vec![singletons("irrationals")],
        Carrier::Dyadics => vec![singletons("non-dyadic points")],
        Carrier::Cantor(_) => vec![family(
            GapKind::Essential,
            Cardinality::Countable,
            "deleted open intervals of the construction",
        )],
        Carrier::CantorEnds(_) => vec![
            family(
                GapKind::Essential,
                Cardinality::Countable,
                "deleted open intervals of the construction",
            ),
            singletons("Cantor points that are not endpoints"),
        ],
        Carrier::Integers => {
            let cardinality = match (&b.lo, &b.hi) {
                (Some(l), Some(h)) => Cardinality::Finite((h - l).to_integer()),
                _ => Cardinality::Countable,
            };
            vec![family(GapKind::Essential, cardinality, "open unit intervals between integers")]
        }
    }
}

/// Every bounded complement component, explicitly between blocks or by
/// family inside a block, plus the unbounded components as rays.
pub fn classify_gaps(e: &SetExpr) -> GapReport {
    let blocks = e.blocks();
    let mut report = GapReport::default();
    let (Some(first), Some(last)) = (blocks.first(), blocks.last()) else {
        return report;
    };
    if let Some((inf, attained)) = first.inf() {
        report.rays.push(Ray {
            side: Side::Left,
            bound: inf,
            includes_bound: !attained,
        });
    }
    for pair in blocks.windows(2) {
        let (Some((a, a_in)), Some((b, b_in))) = (pair[0].sup(), pair[1].inf()) else {
            continue;
        };
        if a < b || (a == b && !a_in && !b_in) {
            let shape = GapShape::between(a_in, b_in, a == b);
            report.explicit.push(Gap::new(a, b, shape));
        }
    }
    for b in blocks {
        report.families.extend(families_of(b));
    }
    if let Some((sup, attained)) = last.sup() {
        report.rays.push(Ray {
            side: Side::Right,
            bound: sup,
            includes_bound: !attained,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn report(s: &str) -> GapReport {
        classify_gaps(&SetExpr::parse(s).unwrap())
    }

    #[test]
    fn worked_example() {
        let r = report("[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,+inf)");
        let shown: Vec<String> = r.explicit.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["(1,2)", "(3,4]", "{5}", "(6,7)"]);
        assert_eq!(r.count(GapKind::Essential), 2);
        assert_eq!(r.count(GapKind::Pseudo), 1);
        assert_eq!(r.count(GapKind::Dedekind), 1);
        assert_eq!(r.families.len(), 1);
        assert_eq!(r.families[0].cardinality, Cardinality::Uncountable);
    }

    #[test]
    fn interval_has_no_gaps() {
        let r = report("[0,2]");
        assert!(r.explicit.is_empty() && r.families.is_empty());
    }

    #[test]
    fn cantor_family_stream() {
        let r = report("C");
        assert_eq!(r.families.len(), 1);
        let first: Vec<Gap> = r.families[0].stream().unwrap().take(3).collect();
        assert_eq!(
            first,
            vec![
                Gap::open(rat(1, 3), rat(2, 3)),
                Gap::open(rat(1, 9), rat(2, 9)),
                Gap::open(rat(7, 9), rat(8, 9))
            ]
        );
    }

    #[test]
    fn integer_family_is_finite_when_bounded() {
        let r = report("[0,5]&Z");
        assert_eq!(r.families[0].cardinality, Cardinality::Finite(BigInt::from(5)));
        assert_eq!(r.families[0].stream().unwrap().count(), 5);
    }

    #[test]
    fn json_roundtrip() {
        let r = report("[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,8) u [10,11]&cantor(2/5)");
        let text = serde_json::to_string(&r).unwrap();
        let back: GapReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
