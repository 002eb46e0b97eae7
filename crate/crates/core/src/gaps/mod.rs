//! Gap taxonomy of subsets of the line, topology agreement, hypothesis
//! checks and verdicts.

mod classify;
mod properties;
mod verdict;

pub use classify::{classify_gaps, Cardinality, Gap, GapFamily, GapKind, GapReport, GapShape, Ray};
pub use properties::{check_properties, topologies_agree, Agreement, Check, PropertyReport, Tri, Witness};
pub use verdict::{characterize, Verdict, VerdictKind};

/// Serde adapters writing exact numbers as strings.
pub(crate) mod ser {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::exactnum::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod bigint {
        use super::*;

        pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(n)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            String::deserialize(d)?.parse().map_err(D::Error::custom)
        }
    }

    pub mod block {
        use super::*;
        use crate::setdsl::{parse_blocks, Block};

        pub fn serialize<S: Serializer>(b: &Block, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(b)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Block, D::Error> {
            let text = String::deserialize(d)?;
            let mut blocks = parse_blocks(&text).map_err(D::Error::custom)?;
            if blocks.len() != 1 {
                return Err(D::Error::custom("expected a single block"));
            }
            Ok(blocks.remove(0))
        }
    }
}
