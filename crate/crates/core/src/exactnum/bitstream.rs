use std::fmt;
use std::sync::{Arc, Mutex};

type BitFn = dyn Fn(usize) -> bool + Send + Sync;

enum Source {
    /// `pre` followed by `period` repeated forever; kept in reduced form.
    Periodic { pre: Vec<bool>, period: Vec<bool> },
    Opaque(Box<BitFn>),
}

struct Inner {
    source: Source,
    memo: Mutex<Vec<bool>>,
}

/// What is known symbolically about a stream's generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolicTag {
    EventuallyConstant,
    Periodic,
    Opaque,
}

impl fmt::Display for SymbolicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolicTag::EventuallyConstant => "eventually-constant",
            SymbolicTag::Periodic => "periodic",
            SymbolicTag::Opaque => "opaque",
        })
    }
}

/// An infinite binary sequence given by a deterministic rule, with the
/// prefix read so far memoized. Cloning shares the memo.
#[derive(Clone)]
pub struct BitStream {
    inner: Arc<Inner>,
}

impl BitStream {
    /// `pre` then `period` repeated. Panics if `period` is empty.
    pub fn periodic(pre: Vec<bool>, period: Vec<bool>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        let (pre, period) = reduce(pre, period);
        Self::from_source(Source::Periodic { pre, period })
    }

    pub fn constant(bit: bool) -> Self {
        Self::periodic(vec![], vec![bit])
    }

    pub fn zeros() -> Self {
        Self::constant(false)
    }

    /// Finite prefix followed by zeros.
    pub fn finite(prefix: Vec<bool>) -> Self {
        Self::periodic(prefix, vec![false])
    }

    /// A generator with no symbolic description; bits are computed on demand
    /// in index order and memoized.
    pub fn opaque(f: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Self::from_source(Source::Opaque(Box::new(f)))
    }

    fn from_source(source: Source) -> Self {
        BitStream {
            inner: Arc::new(Inner {
                source,
                memo: Mutex::new(Vec::new()),
            }),
        }
    }

    /// Bit at 0-based index `i`.
    pub fn bit(&self, i: usize) -> bool {
        match &self.inner.source {
            Source::Periodic { pre, period } => periodic_bit(pre, period, i),
            Source::Opaque(f) => {
                let mut memo = self.inner.memo.lock().expect("bit memo poisoned");
                while memo.len() <= i {
                    let k = memo.len();
                    memo.push(f(k));
                }
                memo[i]
            }
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<bool> {
        if n > 0 {
            self.bit(n - 1);
        }
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// Number of bits materialized by an opaque generator so far.
    pub fn memoized_len(&self) -> usize {
        match &self.inner.source {
            Source::Periodic { .. } => 0,
            Source::Opaque(_) => self.inner.memo.lock().expect("bit memo poisoned").len(),
        }
    }

    /// `(preperiod, period)` when the generator is symbolic.
    pub fn symbolic(&self) -> Option<(&[bool], &[bool])> {
        match &self.inner.source {
            Source::Periodic { pre, period } => Some((pre, period)),
            Source::Opaque(_) => None,
        }
    }

    pub fn tag(&self) -> SymbolicTag {
        match self.symbolic() {
            Some((_, period)) if period.len() == 1 => SymbolicTag::EventuallyConstant,
            Some(_) => SymbolicTag::Periodic,
            None => SymbolicTag::Opaque,
        }
    }

    /// Coordinatewise exclusive-or; symbolic when both inputs are.
    pub fn xor(&self, other: &BitStream) -> BitStream {
        if let (Some((p1, c1)), Some((p2, c2))) = (self.symbolic(), other.symbolic()) {
            let pre_len = p1.len().max(p2.len());
            let per_len = lcm(c1.len(), c2.len());
            let bit = |i| periodic_bit(p1, c1, i) ^ periodic_bit(p2, c2, i);
            let pre = (0..pre_len).map(bit).collect();
            let period = (pre_len..pre_len + per_len).map(bit).collect();
            return BitStream::periodic(pre, period);
        }
        let (x, y) = (self.clone(), other.clone());
        BitStream::opaque(move |i| x.bit(i) ^ y.bit(i))
    }

    /// `"0101…[tag]"` rendering of the first `n` bits.
    pub fn render(&self, n: usize) -> String {
        let bits: String = self
            .prefix(n)
            .into_iter()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        format!("{bits}…[{}]", self.tag())
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbolic() {
            Some((pre, period)) => write!(
                f,
                "BitStream({}({}))",
                bits_to_string(pre),
                bits_to_string(period)
            ),
            None => write!(f, "BitStream({})", self.render(16)),
        }
    }
}

pub(crate) fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn periodic_bit(pre: &[bool], period: &[bool], i: usize) -> bool {
    if i < pre.len() {
        pre[i]
    } else {
        period[(i - pre.len()) % period.len()]
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Primitive period, then pull preperiod bits into the cycle while they match.
fn reduce(mut pre: Vec<bool>, mut period: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    let n = period.len();
    if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d])) {
        period.truncate(d);
    }
    while let Some(&last) = pre.last() {
        if last != *period.last().expect("nonempty period") {
            break;
        }
        pre.pop();
        period.rotate_right(1);
    }
    (pre, period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_canonical() {
        let a = BitStream::periodic(vec![false], vec![true, false]);
        assert_eq!(a.symbolic().unwrap(), (&[][..], &[false, true][..]));
        let b = BitStream::periodic(vec![true, true], vec![true, true, true]);
        assert_eq!(b.symbolic().unwrap(), (&[][..], &[true][..]));
        assert_eq!(b.tag(), SymbolicTag::EventuallyConstant);
    }

    #[test]
    fn opaque_reads_are_stable() {
        let s = BitStream::opaque(|i| (i * 7 + 3) % 5 < 2);
        let first = s.prefix(40);
        let again = s.prefix(80);
        assert_eq!(&again[..40], &first[..]);
        assert_eq!(s.memoized_len(), 80);
        assert_eq!(s.tag(), SymbolicTag::Opaque);
    }

    #[test]
    fn xor_of_symbolic_stays_symbolic() {
        let x = BitStream::periodic(vec![true], vec![false, true]);
        let y = BitStream::periodic(vec![], vec![true, true, false]);
        let z = x.xor(&y);
        assert!(z.symbolic().is_some());
        for i in 0..30 {
            assert_eq!(z.bit(i), x.bit(i) ^ y.bit(i));
        }
    }

    #[test]
    fn render_shows_tag() {
        let s = BitStream::periodic(vec![], vec![false, true]);
        assert_eq!(s.render(4), "0101…[periodic]");
    }
}
