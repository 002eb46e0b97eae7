use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand constructor `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let digits = |t: &str| -> Result<BigInt, ParseRationalError> {
        let t = t.trim();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Invalid(text.to_string()));
        }
        t.parse::<BigInt>()
            .map_err(|_| ParseRationalError::Invalid(text.to_string()))
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (digits(n)?, digits(d)?),
        None => (digits(body)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    let num = if neg { -num } else { num };
    Ok(Rational::new(num, den))
}

/// Truncated decimal rendering with `places` digits after the point, used
/// only for the optional human-readable approximation output.
pub fn ratio_to_decimal(value: &Rational, places: usize) -> String {
    let neg = value.is_negative();
    let abs = value.abs();
    let int = abs.numer() / abs.denom();
    let mut rem = abs.numer() - &int * abs.denom();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if places > 0 {
        out.push('.');
        let ten = BigInt::from(10);
        for _ in 0..places {
            rem *= &ten;
            let digit = &rem / abs.denom();
            rem -= &digit * abs.denom();
            out.push_str(&digit.to_string());
        }
    }
    out
}
