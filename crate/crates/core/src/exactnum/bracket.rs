use std::fmt;

use serde::{Serialize, Serializer};

use super::Quad;

/// Closed interval `[lo, hi]` known to contain a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Quad,
    pub hi: Quad,
}

impl Bracket {
    pub fn exact(v: Quad) -> Self {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Quad {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Quad) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn within(&self, outer: &Bracket) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Bracket {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Bracket", 2)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.end()
    }
}
