use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::classify::{classify_gaps, Gap, GapKind, GapShape, Ray};
use crate::exactnum::{Quad, Rational};
use crate::setdsl::{Block, Carrier, Location, SetExpr, TIGHTEN_DEPTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Point(Rational),
    Gap(Gap),
    Ray(Ray),
    Block(Block),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(p) => write!(f, "{p}"),
            Witness::Gap(g) => write!(f, "gap {g}"),
            Witness::Ray(r) => write!(f, "ray {r}"),
            Witness::Block(b) => write!(f, "block {b}"),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A tri-state answer with witnesses: for a negative answer they refute the
/// property, for `has_isolated_points` they are the isolated points found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub answer: Tri,
    pub witnesses: Vec<Witness>,
}

impl Check {
    /// `No` with the witnesses if there are any, otherwise `Yes` unless the
    /// computation was inexact.
    fn refuted_by(witnesses: Vec<Witness>, exact: bool) -> Self {
        let answer = if !witnesses.is_empty() {
            Tri::No
        } else if exact {
            Tri::Yes
        } else {
            Tri::Unknown
        };
        Check { answer, witnesses }
    }

    pub fn holds(&self) -> bool {
        self.answer == Tri::Yes
    }

    pub fn fails(&self) -> bool {
        self.answer == Tri::No
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub countable: Check,
    pub compact: Check,
    pub perfect: Check,
    pub nowhere_dense: Check,
    pub has_isolated_points: Check,
    pub all_points_two_sided_limits: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub agree: bool,
    pub witness: Option<Gap>,
}

fn touches_left(blocks: &[Block], i: usize) -> bool {
    i > 0 && blocks[i - 1].hi.is_some() && blocks[i - 1].hi == blocks[i].lo
}

fn touches_right(blocks: &[Block], i: usize) -> bool {
    i + 1 < blocks.len() && blocks[i].hi.is_some() && blocks[i].hi == blocks[i + 1].lo
}

/// Cantor-type bounds that bounded descent could not place leave the block
/// analysis inexact.
fn is_exact(b: &Block) -> bool {
    let Some(frame) = b.carrier.frame() else {
        return true;
    };
    [&b.lo, &b.hi].into_iter().flatten().all(|x| {
        !matches!(frame.locate(&Quad::from(x), TIGHTEN_DEPTH), Location::Unknown)
    })
}

fn isolated_points(blocks: &[Block]) -> Vec<Rational> {
    let mut out = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let (tl, tr) = (touches_left(blocks, i), touches_right(blocks, i));
        if b.is_point() {
            if !tl && !tr {
                out.extend(b.lo.clone());
            }
            continue;
        }
        if b.carrier != Carrier::Integers {
            continue;
        }
        let one = Rational::one();
        let candidates: Vec<Rational> = match (&b.lo, &b.hi) {
            (None, None) => vec![Rational::zero()],
            (lo, hi) => [
                lo.clone(),
                lo.as_ref().map(|l| l + &one),
                hi.as_ref().map(|h| h - &one),
                hi.clone(),
            ]
            .into_iter()
            .flatten()
            .collect(),
        };
        let isolated = candidates.into_iter().find(|c| {
            b.interval_contains(&Quad::from(c))
                && !(tl && b.lo.as_ref() == Some(c))
                && !(tr && b.hi.as_ref() == Some(c))
        });
        out.extend(isolated);
    }
    out
}

fn one_sided_points(blocks: &[Block]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let (tl, tr) = (touches_left(blocks, i), touches_right(blocks, i));
        if b.is_point() {
            if !(tl && tr) {
                out.extend(b.lo.clone());
            }
            continue;
        }
        if b.lo_closed && !tl {
            out.extend(b.lo.clone());
        }
        if b.hi_closed && !tr {
            out.extend(b.hi.clone());
        }
        match &b.carrier {
            // The least integer of the block has no points just to its right.
            Carrier::Integers => out.push(match (&b.lo, &b.hi) {
                (Some(l), _) => l.clone(),
                (None, Some(h)) => h.clone(),
                (None, None) => Rational::zero(),
            }),
            // Left end of the first deleted interval inside the block.
            Carrier::Cantor(frame) | Carrier::CantorEnds(frame) => {
                if let (Some(lo), Some(hi)) = (&b.lo, &b.hi) {
                    let inside = frame
                        .gaps(Some((lo.clone(), hi.clone())))
                        .find(|g| &g.lo >= lo && &g.hi <= hi);
                    out.extend(inside.map(|g| g.lo));
                }
            }
            _ => {}
        }
    }
    out.sort();
    out.dedup();
    out
}

fn not_closed(e: &SetExpr) -> Vec<Witness> {
    let report = classify_gaps(e);
    let mut out: Vec<Witness> = Vec::new();
    out.extend(report.rays.into_iter().filter(|r| r.includes_bound).map(Witness::Ray));
    out.extend(
        report
            .explicit
            .into_iter()
            .filter(|g| g.shape != GapShape::Open)
            .map(Witness::Gap),
    );
    out.extend(
        report
            .families
            .into_iter()
            .filter(|f| f.kind == GapKind::Dedekind)
            .map(|f| Witness::Block(f.block)),
    );
    out
}

/// Exact hypothesis checks by case analysis over the normalized blocks.
pub fn check_properties(e: &SetExpr) -> PropertyReport {
    let blocks = e.blocks();
    let exact = blocks.iter().all(is_exact);
    let points = |v: Vec<Rational>| v.into_iter().map(Witness::Point).collect::<Vec<_>>();

    let countable = Check::refuted_by(
        blocks
            .iter()
            .filter(|b| !b.is_countable())
            .map(|b| Witness::Block(b.clone()))
            .collect(),
        true,
    );

    let closed_failures = not_closed(e);
    let mut compact_failures: Vec<Witness> = Vec::new();
    if let Some(b) = blocks.first().filter(|b| b.lo.is_none()) {
        compact_failures.push(Witness::Block(b.clone()));
    }
    if let Some(b) = blocks.last().filter(|b| b.hi.is_none()) {
        compact_failures.push(Witness::Block(b.clone()));
    }
    compact_failures.extend(closed_failures.iter().cloned());
    let compact = Check::refuted_by(compact_failures, exact);

    let nowhere_dense = Check::refuted_by(
        blocks
            .iter()
            .filter(|b| {
                b.has_interior()
                    && matches!(b.carrier, Carrier::Reals | Carrier::Rationals | Carrier::Dyadics)
            })
            .map(|b| Witness::Block(b.clone()))
            .collect(),
        true,
    );

    let isolated = isolated_points(blocks);
    let has_isolated_points = Check {
        answer: if !isolated.is_empty() {
            Tri::Yes
        } else if exact {
            Tri::No
        } else {
            Tri::Unknown
        },
        witnesses: points(isolated.clone()),
    };

    let mut perfect_failures = closed_failures;
    perfect_failures.extend(points(isolated));
    let perfect = Check::refuted_by(perfect_failures, exact);

    let all_points_two_sided_limits = Check::refuted_by(points(one_sided_points(blocks)), exact);

    PropertyReport {
        countable,
        compact,
        perfect,
        nowhere_dense,
        has_isolated_points,
        all_points_two_sided_limits,
    }
}

/// Whether the order topology equals the subspace topology. A member with
/// no points immediately to one side that is not a limit from that side
/// either is a witness; the witness is reported as the pseudo-gap it faces.
pub fn topologies_agree(e: &SetExpr) -> Agreement {
    if e.blocks().is_empty() {
        return Agreement {
            agree: true,
            witness: None,
        };
    }
    for pair in e.blocks().windows(2) {
        let (Some((a, a_in)), Some((b, b_in))) = (pair[0].sup(), pair[1].inf()) else {
            continue;
        };
        if a == b {
            continue;
        }
        // `a` is in the set but has neither a successor nor points converging
        // from the right; symmetrically for `b`.
        let shape = match (a_in, b_in) {
            (true, false) => Some(GapShape::HalfOpenLeft),
            (false, true) => Some(GapShape::HalfOpenRight),
            _ => None,
        };
        if let Some(shape) = shape {
            return Agreement {
                agree: false,
                witness: Some(Gap::new(a, b, shape)),
            };
        }
    }
    Agreement {
        agree: true,
        witness: None,
    }
}
