//! The codec between binary sequences and the middle-thirds set, its group
//! structure, endpoint detection, prefix density and the
//! translation-avoiding diagonal construction.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::exactnum::{ternary_expansion, ternary_expansion_alt, BitStream, Bracket, Quad, Rational, TernaryExpansion};

/// A point of `2^ℕ`, identified with its bit stream.
pub type CantorPoint = BitStream;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CantorError {
    #[error("{0} lies outside [0, 1]")]
    OutOfRange(Rational),
    #[error("{0}: not in Cantor set (every ternary expansion uses the digit 1)")]
    NotInCantorSet(Rational),
}

/// Positions are 1-based: bit `b_1` is the first.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum EndpointVerdict {
    Endpoint { constant_from: usize, value: bool },
    NotEndpoint { witness: (usize, usize) },
    UnknownAtHorizon(usize),
}

fn pow3(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(3u32).pow(n))
}

/// Value of the finite word `bits` read as `Σ 2 b_i / 3^i`.
fn partial_sum(bits: &[bool]) -> Rational {
    let mut num = BigInt::zero();
    for &b in bits {
        num = num * 3u32 + if b { 2u32 } else { 0u32 };
    }
    Rational::new(num, BigInt::from(3u32).pow(bits.len()))
}

/// Exact value of `pre` followed by `period` repeated forever.
fn periodic_value(pre: &[bool], period: &[bool]) -> Rational {
    let head = partial_sum(pre);
    let cycle = partial_sum(period);
    let p = pow3(period.len());
    // One copy of the cycle is worth `cycle`; the repetition sums the
    // geometric series with ratio 3^-len.
    let tail = cycle * &p / (p - Rational::one());
    head + tail / pow3(pre.len())
}

/// `[Σ_{i≤depth} 2 b_i/3^i, that + 3^-depth]`, or the exact value when the
/// stream is symbolic (eventually periodic).
pub fn encode(p: &CantorPoint, depth: usize) -> Bracket {
    if let Some((pre, period)) = p.symbolic() {
        return Bracket::exact(Quad::from(periodic_value(pre, period)));
    }
    encode_prefix(&p.prefix(depth))
}

/// Bracket determined by a finite prefix alone.
pub fn encode_prefix(bits: &[bool]) -> Bracket {
    let lo = partial_sum(bits);
    let hi = &lo + pow3(bits.len()).recip();
    Bracket {
        lo: Quad::from(lo),
        hi: Quad::from(hi),
    }
}

fn digits_to_bits(d: &[u8]) -> Vec<bool> {
    d.iter().map(|&x| x == 2).collect()
}

fn stream_of(exp: &TernaryExpansion) -> BitStream {
    BitStream::periodic(digits_to_bits(&exp.preperiod), digits_to_bits(&exp.period))
}

/// Inverse of the codec, using whichever ternary expansion avoids the
/// digit 1.
pub fn decode(q: &Rational) -> Result<CantorPoint, CantorError> {
    let exp = ternary_expansion(q).map_err(|_| CantorError::OutOfRange(q.clone()))?;
    if exp.avoids_one() {
        return Ok(stream_of(&exp));
    }
    match ternary_expansion_alt(q) {
        Ok(Some(alt)) if alt.avoids_one() => Ok(stream_of(&alt)),
        _ => Err(CantorError::NotInCantorSet(q.clone())),
    }
}

pub fn xor_add(x: &CantorPoint, y: &CantorPoint) -> CantorPoint {
    x.xor(y)
}

/// Symbolic streams are decided exactly. Opaque streams cannot be: no
/// finite prefix shows eventual constancy, nor rules it out.
pub fn is_endpoint(p: &CantorPoint, horizon: usize) -> EndpointVerdict {
    let Some((pre, period)) = p.symbolic() else {
        return EndpointVerdict::UnknownAtHorizon(horizon);
    };
    let first = period[0];
    match period.iter().position(|&b| b != first) {
        None => EndpointVerdict::Endpoint {
            constant_from: pre.len() + 1,
            value: first,
        },
        Some(k) => EndpointVerdict::NotEndpoint {
            witness: (pre.len() + 1, pre.len() + k + 1),
        },
    }
}

/// Cantor pairing `π(i, j) = (i+j)(i+j+1)/2 + i`, 0-based.
pub fn diagonal_position(i: usize, j: usize) -> usize {
    let s = i + j;
    s * (s + 1) / 2 + i
}

/// Inverse of [`diagonal_position`].
pub fn diagonal_pair(k: usize) -> (usize, usize) {
    let mut s = (((8.0 * k as f64 + 1.0).sqrt() - 1.0) / 2.0) as usize;
    while s * (s + 1) / 2 > k {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= k {
        s += 1;
    }
    let i = k - s * (s + 1) / 2;
    (i, s - i)
}

/// Lazily pulled, shared prefix of a stream of points.
struct Pulled {
    source: Box<dyn Iterator<Item = CantorPoint> + Send>,
    cache: Vec<CantorPoint>,
    done: bool,
}

impl Pulled {
    fn get(&mut self, i: usize) -> Option<CantorPoint> {
        while self.cache.len() <= i && !self.done {
            match self.source.next() {
                Some(p) => self.cache.push(p),
                None => self.done = true,
            }
        }
        self.cache.get(i).cloned()
    }
}

/// A point `x` with `(A ⊕ x) ∩ B = ∅`: bit `k` of `x` is the complement of
/// bit `k` of `a_i ⊕ b_j` where `k = π(i, j)`; positions without a pair
/// are 0. The streams are read lazily as bits of `x` are requested.
pub fn avoid_translation<A, B>(a: A, b: B) -> CantorPoint
where
    A: IntoIterator<Item = CantorPoint>,
    A::IntoIter: Send + 'static,
    B: IntoIterator<Item = CantorPoint>,
    B::IntoIter: Send + 'static,
{
    let pull = |s: Box<dyn Iterator<Item = CantorPoint> + Send>| {
        Arc::new(Mutex::new(Pulled {
            source: s,
            cache: Vec::new(),
            done: false,
        }))
    };
    let a = pull(Box::new(a.into_iter()));
    let b = pull(Box::new(b.into_iter()));
    BitStream::opaque(move |k| {
        let (i, j) = diagonal_pair(k);
        let ai = a.lock().expect("stream lock").get(i);
        let bj = b.lock().expect("stream lock").get(j);
        match (ai, bj) {
            (Some(ai), Some(bj)) => !(ai.bit(k) ^ bj.bit(k)),
            _ => false,
        }
    })
}

/// [`avoid_translation`] for finite lists, returned symbolically as a
/// finite word followed by zeros.
pub fn avoid_translation_finite(a: &[CantorPoint], b: &[CantorPoint]) -> CantorPoint {
    if a.is_empty() || b.is_empty() {
        return BitStream::zeros();
    }
    let len = diagonal_position(a.len() - 1, b.len() - 1) + 1;
    let word: Vec<bool> = (0..len)
        .map(|k| {
            let (i, j) = diagonal_pair(k);
            match (a.get(i), b.get(j)) {
                (Some(ai), Some(bj)) => !(ai.bit(k) ^ bj.bit(k)),
                _ => false,
            }
        })
        .collect();
    BitStream::finite(word)
}

/// The position at which `a_i ⊕ x` and `b_j` are guaranteed to differ, if
/// they do differ there.
pub fn translation_certificate(a_i: &CantorPoint, b_j: &CantorPoint, x: &CantorPoint, i: usize, j: usize) -> Option<usize> {
    let k = diagonal_position(i, j);
    (a_i.bit(k) ^ x.bit(k) != b_j.bit(k)).then_some(k)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Density {
    pub dense: bool,
    /// Least missing prefix in lexicographic order, as a 0/1 string.
    pub missing: Option<String>,
}

/// Whether every word of length `depth` (at most 64) is a prefix of one of
/// the first `budget` points.
pub fn dense_at_depth(points: impl IntoIterator<Item = CantorPoint>, depth: usize, budget: usize) -> Density {
    assert!((1..=64).contains(&depth), "depth must be between 1 and 64");
    let word = |bits: &[bool]| bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    let seen: HashSet<u64> = points.into_iter().take(budget).map(|p| word(&p.prefix(depth))).collect();
    let total: u128 = 1u128 << depth;
    if seen.len() as u128 == total {
        return Density {
            dense: true,
            missing: None,
        };
    }
    let first_missing = (0u64..).find(|v| !seen.contains(v)).expect("some prefix is missing");
    let text: String = (0..depth)
        .rev()
        .map(|s| if (first_missing >> s) & 1 == 1 { '1' } else { '0' })
        .collect();
    Density {
        dense: false,
        missing: Some(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&BitStream::zeros(), 5), Bracket::exact(Quad::zero()));
        assert_eq!(encode(&BitStream::finite(bits("1")), 5), Bracket::exact(Quad::from(rat(2, 3))));
        let alt = BitStream::opaque(|i| i % 2 == 0);
        let b = encode(&alt, 20);
        let three_quarters = Quad::from(rat(3, 4));
        assert!(b.contains(&three_quarters));
        assert_eq!(b.width(), Quad::from(pow3(20).recip()));
        let sym = BitStream::periodic(vec![], bits("10"));
        assert_eq!(encode(&sym, 20), Bracket::exact(three_quarters));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&rat(2, 3)).unwrap().prefix(4), bits("1000"));
        assert_eq!(decode(&rat(1, 4)).unwrap().prefix(6), bits("010101"));
        assert_eq!(decode(&rat(1, 2)).unwrap_err(), CantorError::NotInCantorSet(rat(1, 2)));
        assert_eq!(decode(&rat(1, 3)).unwrap().prefix(4), bits("0111"));
    }

    #[test]
    fn xor_examples() {
        let x = BitStream::finite(bits("101"));
        let y = BitStream::finite(bits("110"));
        assert_eq!(xor_add(&x, &y).prefix(3), bits("011"));
        assert_eq!(xor_add(&x, &x).prefix(8), vec![false; 8]);
        assert_eq!(xor_add(&x, &BitStream::zeros()).prefix(8), x.prefix(8));
    }

    #[test]
    fn endpoint_examples() {
        let third = decode(&rat(1, 3)).unwrap();
        assert_eq!(
            is_endpoint(&third, 64),
            EndpointVerdict::Endpoint {
                constant_from: 2,
                value: true
            }
        );
        let alt = BitStream::periodic(vec![], bits("01"));
        assert!(matches!(is_endpoint(&alt, 64), EndpointVerdict::NotEndpoint { .. }));
        let opaque = BitStream::opaque(|i| i % 2 == 1);
        assert_eq!(is_endpoint(&opaque, 64), EndpointVerdict::UnknownAtHorizon(64));
    }

    #[test]
    fn pairing_roundtrip() {
        for k in 0..5000 {
            let (i, j) = diagonal_pair(k);
            assert_eq!(diagonal_position(i, j), k);
        }
    }

    #[test]
    fn translation_examples() {
        let zero = vec![BitStream::zeros()];
        let x = avoid_translation(zero.clone(), zero.clone());
        assert_eq!(x.prefix(4), bits("1000"));
        assert_eq!(avoid_translation_finite(&zero, &zero).prefix(4), bits("1000"));
        let none: Vec<CantorPoint> = Vec::new();
        assert_eq!(avoid_translation(none, zero).prefix(16), vec![false; 16]);
    }

    #[test]
    fn density_examples() {
        let all_finite = (0u64..).map(|n| BitStream::finite((0..6).map(|s| (n >> s) & 1 == 1).collect()));
        assert!(dense_at_depth(all_finite, 5, 64).dense);
        let d = dense_at_depth(std::iter::repeat(BitStream::zeros()), 1, 10);
        assert_eq!(d.missing.as_deref(), Some("1"));
    }
}
