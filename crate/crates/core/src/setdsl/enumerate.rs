//! Canonical enumerations of the countable carriers.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::block::{coprime, is_dyadic, Block, Carrier};
use crate::exactnum::{Quad, Rational};

pub type RationalStream = Box<dyn Iterator<Item = Rational> + Send>;

/// Positive rationals level by level through the Stern–Brocot tree, left to
/// right within a level: 1; 1/2, 2; 1/3, 2/3, 3/2, 3; ...
pub struct SternBrocot {
    level: VecDeque<Node>,
    next_level: Vec<Node>,
}

#[derive(Clone)]
struct Node {
    value: (BigInt, BigInt),
    left: (BigInt, BigInt),
    right: (BigInt, BigInt),
}

impl Default for SternBrocot {
    fn default() -> Self {
        let zero = BigInt::zero;
        let one = BigInt::one;
        SternBrocot {
            level: VecDeque::from([Node {
                value: (one(), one()),
                left: (zero(), one()),
                right: (one(), zero()),
            }]),
            next_level: Vec::new(),
        }
    }
}

impl Iterator for SternBrocot {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if self.level.is_empty() {
            self.level = std::mem::take(&mut self.next_level).into();
        }
        let n = self.level.pop_front()?;
        let mediant = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| (&a.0 + &b.0, &a.1 + &b.1);
        self.next_level.push(Node {
            value: mediant(&n.left, &n.value),
            left: n.left.clone(),
            right: n.value.clone(),
        });
        self.next_level.push(Node {
            value: mediant(&n.value, &n.right),
            left: n.value.clone(),
            right: n.right.clone(),
        });
        Some(Rational::new(n.value.0, n.value.1))
    }
}

/// All of ℚ: 0, then each Stern–Brocot value followed by its negative.
pub fn rationals_signed() -> impl Iterator<Item = Rational> + Send {
    std::iter::once(Rational::zero()).chain(SternBrocot::default().flat_map(|r| [r.clone(), -r]))
}

fn ceil_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Rationals of a bounded block by growing denominator, increasing within
/// each denominator.
fn rationals_bounded(block: Block, dyadic_only: bool) -> RationalStream {
    let lo = block.lo.clone().expect("bounded");
    let hi = block.hi.clone().expect("bounded");
    let mut den = BigInt::one();
    let mut buffer: VecDeque<Rational> = VecDeque::new();
    Box::new(std::iter::from_fn(move || loop {
        if let Some(r) = buffer.pop_front() {
            return Some(r);
        }
        let first = ceil_int(&(&lo * &den));
        let last = floor_int(&(&hi * &den));
        let mut p = first;
        while p <= last {
            if coprime(&p, &den) || (p.is_zero() && den.is_one()) {
                let r = Rational::new(p.clone(), den.clone());
                if block.interval_contains(&Quad::from(&r)) {
                    buffer.push_back(r);
                }
            }
            p += 1;
        }
        den = if dyadic_only { &den * 2 } else { &den + 1 };
    }))
}

/// Dyadics of the whole line, grouped by `max(exponent, ceil |v|)`.
fn dyadics_all() -> impl Iterator<Item = Rational> + Send {
    (0u32..).flat_map(|n| {
        let mut level: Vec<Rational> = Vec::new();
        let bound = BigInt::from(n);
        for e in 0..=n {
            let den = BigInt::one() << e;
            let top = &bound * &den;
            let mut m = -top.clone();
            while m <= top {
                let odd_or_integer = e == 0 || (&m % 2u32) != BigInt::zero();
                if odd_or_integer {
                    let v = Rational::new(m.clone(), den.clone());
                    let mag = ceil_int(&v.abs());
                    if BigInt::from(e).max(mag) == bound {
                        level.push(v);
                    }
                }
                m += 1;
            }
        }
        level.sort();
        level
    })
}

fn integers(block: Block) -> RationalStream {
    match (&block.lo, &block.hi) {
        (Some(lo), hi) => {
            let hi = hi.clone();
            let mut k = ceil_int(lo);
            Box::new(std::iter::from_fn(move || {
                let r = Rational::from_integer(k.clone());
                if hi.as_ref().is_some_and(|h| r > *h) {
                    return None;
                }
                k += 1;
                Some(r)
            }))
        }
        (None, Some(hi)) => {
            let mut k = floor_int(hi);
            Box::new(std::iter::from_fn(move || {
                let r = Rational::from_integer(k.clone());
                k -= 1;
                Some(r)
            }))
        }
        (None, None) => Box::new(
            std::iter::once(Rational::zero()).chain((1u64..).flat_map(|k| {
                let r = Rational::from_integer(BigInt::from(k));
                [r.clone(), -r]
            })),
        ),
    }
}

fn filtered(block: Block, source: impl Iterator<Item = Rational> + Send + 'static) -> RationalStream {
    Box::new(source.filter(move |r| block.interval_contains(&Quad::from(r))))
}

/// Frame endpoints first, then deleted-interval endpoints by generation,
/// left to right.
fn cantor_ends(block: Block) -> RationalStream {
    let frame = block.carrier.frame().expect("frame carrier").clone();
    let window = (
        block.lo.clone().expect("bounded"),
        block.hi.clone().expect("bounded"),
    );
    let b1 = block.clone();
    let heads = [frame.lo.clone(), frame.hi.clone()]
        .into_iter()
        .filter(move |r| b1.interval_contains(&Quad::from(r)));
    let b2 = block.clone();
    let rest = frame
        .gaps(Some(window))
        .flat_map(|g| [g.lo, g.hi])
        .filter(move |r| b2.interval_contains(&Quad::from(r)));
    Box::new(heads.chain(rest))
}

/// Canonical stream of a countable block; `None` for uncountable carriers.
pub(crate) fn block_stream(block: &Block) -> Option<RationalStream> {
    let b = block.clone();
    Some(match &block.carrier {
        Carrier::Reals | Carrier::Cantor(_) => return None,
        Carrier::FinitePoints(ps) => {
            let mut ps = ps.clone();
            ps.sort();
            ps.dedup();
            Box::new(ps.into_iter().filter(move |r| b.interval_contains(&Quad::from(r))))
        }
        Carrier::Integers => integers(b),
        Carrier::Rationals if block.is_bounded() => rationals_bounded(b, false),
        Carrier::Rationals => filtered(b, rationals_signed()),
        Carrier::Dyadics if block.is_bounded() => rationals_bounded(b, true),
        Carrier::Dyadics => filtered(b, dyadics_all().filter(is_dyadic_owned)),
        Carrier::CantorEnds(_) => cantor_ends(b),
    })
}

fn is_dyadic_owned(r: &Rational) -> bool {
    is_dyadic(r)
}

/// Round-robin interleaving of several streams, skipping exhausted ones.
pub struct RoundRobin {
    streams: Vec<RationalStream>,
    cursor: usize,
}

impl RoundRobin {
    pub fn new(streams: Vec<RationalStream>) -> Self {
        RoundRobin { streams, cursor: 0 }
    }
}

impl Iterator for RoundRobin {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        while !self.streams.is_empty() {
            let i = self.cursor % self.streams.len();
            match self.streams[i].next() {
                Some(r) => {
                    self.cursor = i + 1;
                    return Some(r);
                }
                None => {
                    drop(self.streams.remove(i));
                    self.cursor = i;
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn signed_rationals_start() {
        let got: Vec<Rational> = rationals_signed().take(7).collect();
        assert_eq!(
            got,
            vec![rat(0, 1), rat(1, 1), rat(-1, 1), rat(1, 2), rat(-1, 2), rat(2, 1), rat(-2, 1)]
        );
    }

    #[test]
    fn stern_brocot_third_level() {
        let got: Vec<Rational> = SternBrocot::default().skip(3).take(4).collect();
        assert_eq!(got, vec![rat(1, 3), rat(2, 3), rat(3, 2), rat(3, 1)]);
    }

    #[test]
    fn bounded_rationals_grow_denominator() {
        let b = Block::new(Some(rat(0, 1)), Some(rat(1, 1)), false, false, Carrier::Rationals);
        let got: Vec<Rational> = block_stream(&b).unwrap().take(5).collect();
        assert_eq!(got, vec![rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn dyadic_levels_are_injective() {
        let got: Vec<Rational> = dyadics_all().take(400).collect();
        let mut dedup = got.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), got.len());
        assert!(got.iter().all(is_dyadic));
    }

    #[test]
    fn round_robin_skips_finished() {
        let a: RationalStream = Box::new(vec![rat(1, 1)].into_iter());
        let b: RationalStream = Box::new(vec![rat(2, 1), rat(3, 1)].into_iter());
        let got: Vec<Rational> = RoundRobin::new(vec![a, b]).collect();
        assert_eq!(got, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
    }
}
