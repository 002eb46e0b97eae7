//! Shared generators for the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ordtopo::exactnum::{rat, Rational};
use ordtopo::setdsl::SetExpr;

fn bound(r: &Rational) -> String {
    r.to_string()
}

/// A random union of up to four blocks over small dyadic endpoints, in
/// increasing order and sometimes touching. Roughly one in ten draws cannot
/// be normalized; callers draw again.
pub fn random_set_text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..=4);
    let mut cursor = rat(rng.gen_range(-4..4), 2);
    let mut parts = Vec::new();
    for k in 0..n {
        let lo = &cursor + rat(rng.gen_range(0..3), 2);
        let hi = &lo + rat(rng.gen_range(1..5), 2);
        cursor = hi.clone();
        if rng.gen_bool(0.15) {
            parts.push(format!("{{{}}}", bound(&lo)));
            cursor = lo;
            continue;
        }
        let open_lo = if k == 0 && rng.gen_bool(0.1) { "(-inf".to_string() } else {
            format!("{}{}", if rng.gen_bool(0.5) { "[" } else { "(" }, bound(&lo))
        };
        let close_hi = if k == n - 1 && rng.gen_bool(0.1) { "+inf)".to_string() } else {
            format!("{}{}", bound(&hi), if rng.gen_bool(0.5) { "]" } else { ")" })
        };
        let carrier = match rng.gen_range(0..6) {
            0 => String::new(),
            1 => "&Q".to_string(),
            2 => "&D".to_string(),
            3 => "&Z".to_string(),
            4 => format!("&cantor(1/3)@[{},{}]", bound(&lo), bound(&hi)),
            _ => format!("&ends(1/3)@[{},{}]", bound(&lo), bound(&hi)),
        };
        let carrier = if carrier.contains('@') && (open_lo.contains("inf") || close_hi.contains("inf")) {
            String::new()
        } else {
            carrier
        };
        parts.push(format!("{open_lo},{close_hi}{carrier}"));
    }
    parts.join(" u ")
}

/// Draws until a set parses and normalizes.
pub fn random_set(rng: &mut ChaCha8Rng) -> SetExpr {
    loop {
        if let Ok(e) = SetExpr::parse(&random_set_text(rng)) {
            return e;
        }
    }
}

/// Exact value of `pre` then `period` repeated, as ternary digits 0/2.
pub fn cantor_value(pre: &[bool], period: &[bool]) -> Rational {
    let word = |w: &[bool]| {
        w.iter().fold((rat(0, 1), rat(1, 1)), |(s, scale), &b| {
            let scale = scale * rat(1, 3);
            (if b { s + &scale * rat(2, 1) } else { s }, scale)
        })
    };
    let (head, hscale) = word(pre);
    let (cycle, cscale) = word(period);
    head + hscale * cycle / (rat(1, 1) - cscale)
}

/// Random word with length drawn from `lens`.
pub fn random_word(rng: &mut ChaCha8Rng, lens: std::ops::RangeInclusive<usize>) -> Vec<bool> {
    let len = rng.gen_range(lens);
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}
