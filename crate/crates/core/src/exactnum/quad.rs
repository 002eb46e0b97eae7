use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::rational::{parse_rational, Rational};

/// An element `a + b*sqrt(2)` of the quadratic field `Q(sqrt 2)`.
///
/// The pair `(a, b)` is unique for every real value because `sqrt 2` is
/// irrational, so structural equality coincides with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Quad {
    a: Rational,
    b: Rational,
}

impl Quad {
    pub fn new(a: Rational, b: Rational) -> Self {
        Quad { a, b }
    }

    pub fn zero() -> Self {
        Quad::default()
    }

    /// `q * sqrt(2)`.
    pub fn sqrt2_times(q: Rational) -> Self {
        Quad {
            a: Rational::zero(),
            b: q,
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Sign of the real value, decided by one squaring when the two parts
    /// disagree in sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            // a and b have opposite signs: compare a^2 with 2 b^2.
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * Rational::from_integer(2.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => unreachable!("sqrt 2 is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Quad {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, k: &Rational) -> Quad {
        Quad {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Rational bracket `[lo, hi]` with `hi - lo <= 2^-bits` containing the
    /// value; both ends are exact rationals.
    pub fn rational_bracket(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        // Bisect sqrt(2) inside [1, 3/2] until the scaled width is small enough.
        let mut lo = Rational::from_integer(1.into());
        let mut hi = Rational::new(3.into(), 2.into());
        let two = Rational::from_integer(2.into());
        let target = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(bits));
        let coef = self.b.abs();
        while (&hi - &lo) * &coef > target {
            let mid = (&lo + &hi) / &two;
            if &mid * &mid < two {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = &self.a + &self.b * &lo;
        let y = &self.a + &self.b * &hi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }
}

/// Total order consistent with the real values, computed exactly.
pub fn quad_cmp(x: &Quad, y: &Quad) -> Ordering {
    if x.b == y.b {
        return x.a.cmp(&y.a);
    }
    (x.clone() - y.clone()).signum()
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        quad_cmp(self, other)
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Quad {
    fn from(a: Rational) -> Self {
        Quad {
            a,
            b: Rational::zero(),
        }
    }
}

impl From<&Rational> for Quad {
    fn from(a: &Rational) -> Self {
        Quad::from(a.clone())
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        Quad {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl<'a> Sub<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        Quad {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Add<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        Quad {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        let two = Rational::from_integer(2.into());
        Quad {
            a: &self.a * &rhs.a + &self.b * &rhs.b * two,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*sqrt2", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid quadratic literal `{0}` (expected `p/q` or `p/q + r/s*sqrt2`)")]
pub struct ParseQuadError(pub String);

impl FromStr for Quad {
    type Err = ParseQuadError;

    /// Accepts the `Display` form: `a`, `a + b*sqrt2`, `a - b*sqrt2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQuadError(s.to_string());
        let t = s.trim();
        let Some(head) = t.strip_suffix("*sqrt2") else {
            return parse_rational(t).map(Quad::from).map_err(|_| err());
        };
        // Split at the last binary +/- separating the rational part.
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] == b' ')
            .ok_or_else(err)?;
        let a = parse_rational(&head[..split]).map_err(|_| err())?;
        let mut b = parse_rational(&head[split + 1..]).map_err(|_| err())?;
        if bytes[split] == b'-' {
            b = -b;
        }
        Ok(Quad::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn q(a: Rational, b: Rational) -> Quad {
        Quad::new(a, b)
    }

    #[test]
    fn documented_comparisons() {
        let z = Rational::zero;
        assert_eq!(
            quad_cmp(&q(z(), rat(1, 1)), &q(rat(1, 1), z())),
            Ordering::Greater
        );
        // 3/2 vs sqrt 2: 9/4 > 2.
        assert_eq!(
            quad_cmp(&q(rat(3, 2), z()), &q(z(), rat(1, 1))),
            Ordering::Greater
        );
        let x = q(rat(1, 2), rat(1, 3));
        assert_eq!(quad_cmp(&x, &x.clone()), Ordering::Equal);
    }

    #[test]
    fn mixed_sign_cases() {
        // 1 - sqrt2 < 0, 3/2 - sqrt2 > 0, -3/2 + sqrt2 < 0.
        assert_eq!(q(rat(1, 1), rat(-1, 1)).signum(), Ordering::Less);
        assert_eq!(q(rat(3, 2), rat(-1, 1)).signum(), Ordering::Greater);
        assert_eq!(q(rat(-3, 2), rat(1, 1)).signum(), Ordering::Less);
        assert_eq!(q(rat(-1, 1), rat(1, 1)).signum(), Ordering::Greater);
    }

    #[test]
    fn display_and_parse() {
        let x = q(rat(1, 2), rat(-1, 3));
        assert_eq!(x.to_string(), "1/2 - 1/3*sqrt2");
        assert_eq!(x.to_string().parse::<Quad>().unwrap(), x);
        let y = q(rat(-2, 1), rat(5, 7));
        assert_eq!(y.to_string(), "-2 + 5/7*sqrt2");
        assert_eq!(y.to_string().parse::<Quad>().unwrap(), y);
        assert_eq!("3/4".parse::<Quad>().unwrap(), Quad::from(rat(3, 4)));
        assert!("sqrt2".parse::<Quad>().is_err());
    }

    #[test]
    fn rational_bracket_contains_value() {
        let x = q(rat(1, 1), rat(1, 1));
        let (lo, hi) = x.rational_bracket(20);
        assert!(Quad::from(lo.clone()) < x && x < Quad::from(hi.clone()));
        assert!(hi - lo <= rat(1, 1 << 20));
    }
}
