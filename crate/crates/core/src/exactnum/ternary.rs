use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::rational::Rational;

/// `0.(preperiod)(period period ...)` in base 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryExpansion {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("{0} is outside [0, 1]")]
    OutOfRange(Rational),
}

impl TernaryExpansion {
    /// Digit at 0-based position `i` after the point.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn terminates(&self) -> bool {
        self.period == [0]
    }

    pub fn avoids_one(&self) -> bool {
        !self.preperiod.contains(&1) && !self.period.contains(&1)
    }

    /// Exact value via the geometric-series closed form.
    pub fn value(&self) -> Rational {
        let three = BigInt::from(3);
        let mut num = BigInt::zero();
        for &d in &self.preperiod {
            num = num * &three + BigInt::from(d);
        }
        let k = self.preperiod.len() as u32;
        let head = Rational::new(num, three.pow(k));
        let mut per = BigInt::zero();
        for &d in &self.period {
            per = per * &three + BigInt::from(d);
        }
        let p = self.period.len() as u32;
        let tail = Rational::new(per, (three.pow(p) - BigInt::one()) * three.pow(k));
        head + tail
    }
}

/// Base-3 expansion of `q` in `[0, 1]` by long division.
///
/// Returns the terminating form when `q` has two expansions (period `[0]`);
/// `1` is returned as `0.(2)`, its only digit expansion.
pub fn ternary_expansion(q: &Rational) -> Result<TernaryExpansion, ExpansionError> {
    if *q < Rational::zero() || *q > Rational::one() {
        return Err(ExpansionError::OutOfRange(q.clone()));
    }
    if q.is_one() {
        return Ok(TernaryExpansion {
            preperiod: vec![],
            period: vec![2],
        });
    }
    let den = q.denom().clone();
    let mut rem = q.numer().clone();
    let three = BigInt::from(3);
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<u8> = Vec::new();
    loop {
        if rem.is_zero() {
            return Ok(TernaryExpansion {
                preperiod: digits,
                period: vec![0],
            });
        }
        if let Some(&start) = seen.get(&rem) {
            let period = digits.split_off(start);
            return Ok(TernaryExpansion {
                preperiod: digits,
                period,
            });
        }
        seen.insert(rem.clone(), digits.len());
        rem *= &three;
        let d = &rem / &den;
        rem -= &d * &den;
        digits.push(u8::try_from(d).expect("ternary digit"));
    }
}

/// The non-terminating alternate `0.d1...(dk - 1)(2)` of a terminating
/// expansion, when one exists.
pub fn ternary_expansion_alt(q: &Rational) -> Result<Option<TernaryExpansion>, ExpansionError> {
    let exp = ternary_expansion(q)?;
    if !exp.terminates() || exp.preperiod.is_empty() {
        return Ok(None);
    }
    let mut pre = exp.preperiod;
    let last = pre.last_mut().expect("nonempty");
    *last -= 1;
    Ok(Some(TernaryExpansion {
        preperiod: pre,
        period: vec![2],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn exp(pre: &[u8], per: &[u8]) -> TernaryExpansion {
        TernaryExpansion {
            preperiod: pre.to_vec(),
            period: per.to_vec(),
        }
    }

    #[test]
    fn documented_expansions() {
        assert_eq!(ternary_expansion(&rat(1, 4)).unwrap(), exp(&[], &[0, 2]));
        assert_eq!(ternary_expansion(&rat(2, 3)).unwrap(), exp(&[2], &[0]));
        assert_eq!(ternary_expansion(&rat(0, 1)).unwrap(), exp(&[], &[0]));
        assert_eq!(ternary_expansion(&rat(1, 1)).unwrap(), exp(&[], &[2]));
        assert_eq!(ternary_expansion(&rat(1, 2)).unwrap(), exp(&[], &[1]));
    }

    #[test]
    fn alternate_form() {
        assert_eq!(
            ternary_expansion_alt(&rat(1, 3)).unwrap(),
            Some(exp(&[0], &[2]))
        );
        assert_eq!(ternary_expansion_alt(&rat(1, 4)).unwrap(), None);
        assert_eq!(ternary_expansion_alt(&rat(0, 1)).unwrap(), None);
    }

    #[test]
    fn out_of_range() {
        assert!(ternary_expansion(&rat(-1, 5)).is_err());
        assert!(ternary_expansion(&rat(4, 3)).is_err());
    }

    #[test]
    fn closed_form_resums() {
        for (n, d) in [(1, 4), (5, 7), (13, 27), (1, 1), (0, 1), (99, 100)] {
            let q = rat(n, d);
            assert_eq!(ternary_expansion(&q).unwrap().value(), q);
        }
        assert_eq!(exp(&[0], &[2]).value(), rat(1, 3));
    }
}
