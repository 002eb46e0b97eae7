//! Self-similar Cantor constructions on a closed frame interval.

use std::collections::HashSet;
use std::fmt;

use num_traits::One;

use crate::exactnum::{rat, Quad, Rational};

/// Which end of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The Cantor set built on `[lo, hi]` by keeping, at every stage, the two
/// closed outer subintervals of relative length `ratio` and deleting the
/// open middle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorFrame {
    pub ratio: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

/// One deleted middle interval. `path` records the left (`false`) / right
/// (`true`) choices from the frame down to the interval it was removed from,
/// so the generation is `path.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameGap {
    pub lo: Rational,
    pub hi: Rational,
    pub path: Vec<bool>,
}

impl FrameGap {
    pub fn generation(&self) -> usize {
        self.path.len() + 1
    }

    pub fn endpoint(&self, side: Side) -> &Rational {
        match side {
            Side::Left => &self.lo,
            Side::Right => &self.hi,
        }
    }
}

/// Result of descending the construction tree towards a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Outside,
    FrameEndpoint(Side),
    /// Strictly inside a deleted interval.
    InGap(FrameGap),
    GapEndpoint(FrameGap, Side),
    /// In the Cantor set but not an endpoint of any deleted interval
    /// (certified by a repeating descent state).
    Interior,
    /// Descent did not resolve within the requested number of stages.
    Unknown,
}

impl CantorFrame {
    pub fn new(ratio: Rational, lo: Rational, hi: Rational) -> Self {
        CantorFrame { ratio, lo, hi }
    }

    pub fn middle_thirds() -> Self {
        CantorFrame::new(rat(1, 3), rat(0, 1), rat(1, 1))
    }

    pub fn is_middle_thirds_ratio(&self) -> bool {
        self.ratio == rat(1, 3)
    }

    pub fn ratio_is_valid(ratio: &Rational) -> bool {
        *ratio > rat(0, 1) && *ratio < rat(1, 2)
    }

    /// The closed interval kept after following `path`.
    pub fn interval_at(&self, path: &[bool]) -> (Rational, Rational) {
        let (mut a, mut b) = (self.lo.clone(), self.hi.clone());
        for &right in path {
            let len = (&b - &a) * &self.ratio;
            if right {
                a = &b - len;
            } else {
                b = &a + len;
            }
        }
        (a, b)
    }

    /// The gap deleted from the interval at `path`.
    pub fn gap_at(&self, path: &[bool]) -> FrameGap {
        let (a, b) = self.interval_at(path);
        let len = (&b - &a) * &self.ratio;
        FrameGap {
            lo: &a + &len,
            hi: &b - &len,
            path: path.to_vec(),
        }
    }

    /// Descends at most `max_stages` stages. For rational points a repeated
    /// relative position proves membership without an endpoint hit; with
    /// ratio 1/3 that always happens, so the answer is exact.
    pub fn locate(&self, x: &Quad, max_stages: usize) -> Location {
        let lo = Quad::from(&self.lo);
        let hi = Quad::from(&self.hi);
        if *x < lo || *x > hi {
            return Location::Outside;
        }
        if *x == lo {
            return Location::FrameEndpoint(Side::Left);
        }
        if *x == hi {
            return Location::FrameEndpoint(Side::Right);
        }
        let limit = if self.is_middle_thirds_ratio() && x.is_rational() {
            usize::MAX
        } else {
            max_stages
        };
        let width = &self.hi - &self.lo;
        let inv_width = Rational::one() / &width;
        let mut t = (x - &lo).scale(&inv_width);
        let rho = Quad::from(&self.ratio);
        let co = Quad::from(Rational::one() - &self.ratio);
        let inv_rho = Rational::one() / &self.ratio;
        let mut seen: HashSet<Quad> = HashSet::new();
        let mut path = Vec::new();
        let mut stage = 0usize;
        loop {
            if stage >= limit {
                return Location::Unknown;
            }
            stage += 1;
            if t.is_rational() && !seen.insert(t.clone()) {
                return Location::Interior;
            }
            if t < rho {
                path.push(false);
                t = t.scale(&inv_rho);
            } else if t == rho {
                return Location::GapEndpoint(self.gap_at(&path), Side::Left);
            } else if t < co {
                return Location::InGap(self.gap_at(&path));
            } else if t == co {
                return Location::GapEndpoint(self.gap_at(&path), Side::Right);
            } else {
                path.push(true);
                t = (&t - &co).scale(&inv_rho);
            }
        }
    }

    /// Deleted intervals in generation order, left to right within a
    /// generation, restricted to those meeting the closed window `[lo, hi]`.
    pub fn gaps(&self, window: Option<(Rational, Rational)>) -> FrameGaps {
        FrameGaps {
            frame: self.clone(),
            window,
            frontier: vec![Vec::new()],
            pending: std::collections::VecDeque::new(),
        }
    }
}

impl fmt::Display for CantorFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on [{},{}]", self.ratio, self.lo, self.hi)
    }
}

/// Iterator over the deleted intervals of a frame; see [`CantorFrame::gaps`].
pub struct FrameGaps {
    frame: CantorFrame,
    window: Option<(Rational, Rational)>,
    frontier: Vec<Vec<bool>>,
    pending: std::collections::VecDeque<FrameGap>,
}

impl FrameGaps {
    fn meets_window(&self, a: &Rational, b: &Rational) -> bool {
        match &self.window {
            None => true,
            Some((lo, hi)) => a <= hi && b >= lo,
        }
    }
}

impl Iterator for FrameGaps {
    type Item = FrameGap;

    fn next(&mut self) -> Option<FrameGap> {
        loop {
            if let Some(g) = self.pending.pop_front() {
                return Some(g);
            }
            if self.frontier.is_empty() {
                return None;
            }
            let current = std::mem::take(&mut self.frontier);
            let mut next = Vec::with_capacity(current.len() * 2);
            for path in current {
                let gap = self.frame.gap_at(&path);
                if self.meets_window(&gap.lo, &gap.hi) {
                    self.pending.push_back(gap);
                }
                for right in [false, true] {
                    let mut child = path.clone();
                    child.push(right);
                    let (a, b) = self.frame.interval_at(&child);
                    if self.meets_window(&a, &b) {
                        next.push(child);
                    }
                }
            }
            self.frontier = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_gaps_of_middle_thirds() {
        let gaps: Vec<(Rational, Rational)> = CantorFrame::middle_thirds()
            .gaps(None)
            .take(3)
            .map(|g| (g.lo, g.hi))
            .collect();
        assert_eq!(
            gaps,
            vec![
                (rat(1, 3), rat(2, 3)),
                (rat(1, 9), rat(2, 9)),
                (rat(7, 9), rat(8, 9))
            ]
        );
    }

    #[test]
    fn middle_fifths_first_gap() {
        let f = CantorFrame::new(rat(2, 5), rat(0, 1), rat(1, 1));
        let g = f.gaps(None).next().unwrap();
        assert_eq!((g.lo, g.hi), (rat(2, 5), rat(3, 5)));
    }

    #[test]
    fn locate_classifies_points() {
        let f = CantorFrame::middle_thirds();
        assert_eq!(f.locate(&rat(1, 4).into(), 8), Location::Interior);
        assert!(matches!(f.locate(&rat(1, 2).into(), 8), Location::InGap(_)));
        assert!(matches!(
            f.locate(&rat(2, 9).into(), 8),
            Location::GapEndpoint(_, Side::Right)
        ));
        assert_eq!(
            f.locate(&rat(0, 1).into(), 8),
            Location::FrameEndpoint(Side::Left)
        );
        assert_eq!(f.locate(&rat(3, 2).into(), 8), Location::Outside);
        // sqrt2 - 1 ~ 0.414 lies in the first middle third.
        let x = Quad::new(rat(-1, 1), rat(1, 1));
        assert!(matches!(f.locate(&x, 4), Location::InGap(_)));
    }

    #[test]
    fn windowed_gaps_stay_in_window() {
        let f = CantorFrame::middle_thirds();
        for g in f.gaps(Some((rat(0, 1), rat(1, 3)))).take(20) {
            assert!(g.lo <= rat(1, 3));
        }
    }
}
