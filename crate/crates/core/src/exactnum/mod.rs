//! Exact arithmetic: rationals, the quadratic field `Q(sqrt 2)`, ternary
//! expansions and memoized bit streams.

mod bitstream;
mod bracket;
mod quad;
mod rational;
mod ternary;

pub use bitstream::{BitStream, SymbolicTag};
pub use bracket::Bracket;
pub use quad::{quad_cmp, ParseQuadError, Quad};
pub use rational::{parse_rational, rat, ratio_to_decimal, ParseRationalError, Rational};
pub use ternary::{ternary_expansion, ternary_expansion_alt, ExpansionError, TernaryExpansion};
