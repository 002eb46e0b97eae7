//! Back-and-forth construction of order isomorphisms between countable
//! dense orders without endpoints, evaluated lazily with first-fit
//! witnesses.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::exactnum::{Quad, Rational};
use crate::setdsl::{rationals_signed, SetError, SetExpr};

/// Order properties the caller asserts about an enumeration. They are not
/// checked; a failed witness search names the claim it implicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claims {
    pub no_min: bool,
    pub no_max: bool,
    pub no_essential_gaps: bool,
}

impl Claims {
    pub const ALL: Claims = Claims {
        no_min: true,
        no_max: true,
        no_essential_gaps: true,
    };
    pub const NONE: Claims = Claims {
        no_min: false,
        no_max: false,
        no_essential_gaps: false,
    };
}

/// Which constraint a witness search was trying to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Below every current image (needs `no_min`).
    Below,
    /// Above every current image (needs `no_max`).
    Above,
    /// Strictly between two images (needs `no_essential_gaps`).
    Between,
    /// Unconstrained; fails only on an empty enumeration.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackForthError {
    #[error("no witness {constraint:?} found after scanning {scanned} elements{}", if *.source_exhausted { " (enumeration exhausted)" } else { "" })]
    BudgetExhausted {
        scanned: usize,
        source_exhausted: bool,
        constraint: Constraint,
    },
    #[error("point not reached within {steps} schedule steps")]
    NotReached { steps: usize },
}

/// An injective enumeration of an order, read lazily and cached.
pub struct EnumOrder {
    label: String,
    source: Box<dyn Iterator<Item = Quad> + Send>,
    cache: Vec<Quad>,
    seen: HashSet<Quad>,
    exhausted: bool,
    claims: Claims,
}

impl fmt::Debug for EnumOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnumOrder")
            .field("label", &self.label)
            .field("cached", &self.cache.len())
            .field("claims", &self.claims)
            .finish()
    }
}

impl EnumOrder {
    /// Repeated elements of `source` are skipped so the enumeration stays
    /// injective.
    pub fn new(
        label: impl Into<String>,
        source: impl Iterator<Item = Quad> + Send + 'static,
        claims: Claims,
    ) -> Self {
        EnumOrder {
            label: label.into(),
            source: Box::new(source),
            cache: Vec::new(),
            seen: HashSet::new(),
            exhausted: false,
            claims,
        }
    }

    pub fn from_rationals(
        label: impl Into<String>,
        source: impl Iterator<Item = Rational> + Send + 'static,
        claims: Claims,
    ) -> Self {
        Self::new(label, source.map(Quad::from), claims)
    }

    /// The canonical enumeration of ℚ: 0, 1, -1, 1/2, -1/2, 2, -2, ...
    pub fn rationals() -> Self {
        Self::from_rationals("Q", rationals_signed(), Claims::ALL)
    }

    /// Canonical enumeration of a countable set description.
    pub fn of_set(e: &SetExpr, claims: Claims) -> Result<Self, SetError> {
        Ok(Self::from_rationals(e.to_string(), e.enumerate()?, claims))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    /// Element `i` (0-based) of the enumeration.
    pub fn get(&mut self, i: usize) -> Option<&Quad> {
        while self.cache.len() <= i && !self.exhausted {
            match self.source.next() {
                Some(q) => {
                    if self.seen.insert(q.clone()) {
                        self.cache.push(q);
                    }
                }
                None => self.exhausted = true,
            }
        }
        self.cache.get(i)
    }

    pub fn prefix(&mut self, n: usize) -> &[Quad] {
        self.get(n.saturating_sub(1));
        &self.cache[..n.min(self.cache.len())]
    }

    pub fn cached_len(&self) -> usize {
        self.cache.len()
    }

    /// First element strictly inside `(lo, hi)` (missing bounds are
    /// infinite), scanning at most `budget` elements.
    fn first_fit(
        &mut self,
        lo: Option<&Quad>,
        hi: Option<&Quad>,
        budget: usize,
    ) -> Result<Quad, BackForthError> {
        let constraint = match (lo, hi) {
            (None, None) => Constraint::Free,
            (Some(_), None) => Constraint::Above,
            (None, Some(_)) => Constraint::Below,
            (Some(_), Some(_)) => Constraint::Between,
        };
        for i in 0..budget {
            let Some(c) = self.get(i) else {
                return Err(BackForthError::BudgetExhausted {
                    scanned: i,
                    source_exhausted: true,
                    constraint,
                });
            };
            if lo.is_none_or(|l| c > l) && hi.is_none_or(|h| c < h) {
                return Ok(c.clone());
            }
        }
        Err(BackForthError::BudgetExhausted {
            scanned: budget,
            source_exhausted: false,
            constraint,
        })
    }
}

/// A finite order-preserving injection, kept sorted in both directions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialIso {
    forward: BTreeMap<Quad, Quad>,
    backward: BTreeMap<Quad, Quad>,
}

impl PartialIso {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from explicit pairs; `None` if they are not strictly increasing
    /// in both coordinates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Quad, Quad)>) -> Option<Self> {
        let mut iso = PartialIso::new();
        for (a, b) in pairs {
            if iso.forward.contains_key(&a) || iso.backward.contains_key(&b) {
                return None;
            }
            iso.forward.insert(a, b.clone());
            iso.backward.insert(b, Quad::zero());
        }
        iso.backward = iso.forward.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        iso.is_order_preserving().then_some(iso)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn image(&self, a: &Quad) -> Option<&Quad> {
        self.forward.get(a)
    }

    pub fn preimage(&self, b: &Quad) -> Option<&Quad> {
        self.backward.get(b)
    }

    /// Pairs sorted by domain element.
    pub fn pairs(&self) -> impl Iterator<Item = (&Quad, &Quad)> {
        self.forward.iter()
    }

    pub fn is_order_preserving(&self) -> bool {
        let images: Vec<&Quad> = self.forward.values().collect();
        images.windows(2).all(|w| w[0] < w[1]) && self.backward.len() == self.forward.len()
    }

    fn insert(&mut self, a: Quad, b: Quad) {
        self.forward.insert(a.clone(), b.clone());
        self.backward.insert(b, a);
    }

    /// Adds `a` to the domain, paired with the first element of `target`
    /// that sits in the same position relative to the current range. A no-op
    /// returning the existing image if `a` is already in the domain.
    pub fn extend_domain(
        &mut self,
        a: &Quad,
        target: &mut EnumOrder,
        budget: usize,
    ) -> Result<Quad, BackForthError> {
        if let Some(b) = self.forward.get(a) {
            return Ok(b.clone());
        }
        let lo = self.forward.range(..a).next_back().map(|(_, b)| b);
        let hi = self.forward.range(a..).next().map(|(_, b)| b);
        let b = target.first_fit(lo, hi, budget)?;
        self.insert(a.clone(), b.clone());
        Ok(b)
    }

    /// Mirror of [`PartialIso::extend_domain`].
    pub fn extend_range(
        &mut self,
        b: &Quad,
        source: &mut EnumOrder,
        budget: usize,
    ) -> Result<Quad, BackForthError> {
        if let Some(a) = self.backward.get(b) {
            return Ok(a.clone());
        }
        let lo = self.backward.range(..b).next_back().map(|(_, a)| a);
        let hi = self.backward.range(b..).next().map(|(_, a)| a);
        let a = source.first_fit(lo, hi, budget)?;
        self.insert(a.clone(), b.clone());
        Ok(a)
    }
}

/// The back-and-forth isomorphism, built on demand. Step `2j-1` puts the
/// `j`-th element of the source into the domain, step `2j` the `j`-th
/// element of the target into the range.
#[derive(Debug)]
pub struct LazyIso {
    source: EnumOrder,
    target: EnumOrder,
    state: PartialIso,
    steps: usize,
    budget: usize,
}

/// Default number of elements scanned per witness search.
pub const DEFAULT_BUDGET: usize = 1 << 20;

pub fn build_iso(source: EnumOrder, target: EnumOrder) -> LazyIso {
    LazyIso {
        source,
        target,
        state: PartialIso::new(),
        steps: 0,
        budget: DEFAULT_BUDGET,
    }
}

impl LazyIso {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn state(&self) -> &PartialIso {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn source(&mut self) -> &mut EnumOrder {
        &mut self.source
    }

    pub fn target(&mut self) -> &mut EnumOrder {
        &mut self.target
    }

    /// One schedule step. A finite enumeration that has run out makes its
    /// steps no-ops.
    pub fn step(&mut self) -> Result<(), BackForthError> {
        let n = self.steps + 1;
        let j = n.div_ceil(2) - 1;
        if n % 2 == 1 {
            if let Some(a) = self.source.get(j).cloned() {
                self.state.extend_domain(&a, &mut self.target, self.budget)?;
            }
        } else if let Some(b) = self.target.get(j).cloned() {
            self.state.extend_range(&b, &mut self.source, self.budget)?;
        }
        self.steps = n;
        Ok(())
    }

    pub fn run_until(&mut self, steps: usize) -> Result<(), BackForthError> {
        while self.steps < steps {
            self.step()?;
        }
        Ok(())
    }

    /// Image of a source element: runs further schedule steps, at most
    /// `max_steps` of them, until `x` is in the domain. Evaluated points are
    /// answered from the state without new steps.
    pub fn eval(&mut self, x: &Quad, max_steps: usize) -> Result<Quad, BackForthError> {
        let start = self.steps;
        loop {
            if let Some(b) = self.state.image(x) {
                return Ok(b.clone());
            }
            if self.steps - start >= max_steps {
                return Err(BackForthError::NotReached { steps: max_steps });
            }
            self.step()?;
        }
    }

    /// Preimage of a target element, as [`LazyIso::eval`].
    pub fn eval_inverse(&mut self, y: &Quad, max_steps: usize) -> Result<Quad, BackForthError> {
        let start = self.steps;
        loop {
            if let Some(a) = self.state.preimage(y) {
                return Ok(a.clone());
            }
            if self.steps - start >= max_steps {
                return Err(BackForthError::NotReached { steps: max_steps });
            }
            self.step()?;
        }
    }
}

pub fn eval_iso(iso: &mut LazyIso, x: &Quad, max_steps: usize) -> Result<Quad, BackForthError> {
    iso.eval(x, max_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn q(n: i64, d: i64) -> Quad {
        Quad::from(rat(n, d))
    }

    #[test]
    fn first_pair_is_unconstrained() {
        let mut phi = PartialIso::new();
        let b = phi.extend_domain(&q(0, 1), &mut EnumOrder::rationals(), 10).unwrap();
        assert_eq!(b, q(0, 1));
    }

    #[test]
    fn between_picks_first_fit() {
        let mut phi = PartialIso::from_pairs([(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1))]).unwrap();
        let b = phi.extend_domain(&q(1, 2), &mut EnumOrder::rationals(), 100).unwrap();
        assert_eq!(b, q(1, 2));
    }

    #[test]
    fn present_points_are_noops() {
        let mut phi = PartialIso::from_pairs([(q(0, 1), q(5, 1))]).unwrap();
        let before = phi.clone();
        assert_eq!(phi.extend_domain(&q(0, 1), &mut EnumOrder::rationals(), 1).unwrap(), q(5, 1));
        assert_eq!(phi, before);
    }

    #[test]
    fn range_extension() {
        let mut phi = PartialIso::new();
        let a = phi.extend_range(&q(7, 1), &mut EnumOrder::rationals(), 10).unwrap();
        assert_eq!(a, q(0, 1));
    }

    #[test]
    fn finite_source_exhausts() {
        let mut phi = PartialIso::from_pairs([(q(0, 1), q(0, 1))]).unwrap();
        let mut only_zero = EnumOrder::new("{0}", std::iter::once(q(0, 1)), Claims::NONE);
        let err = phi.extend_range(&q(1, 1), &mut only_zero, 100).unwrap_err();
        assert!(matches!(
            err,
            BackForthError::BudgetExhausted {
                source_exhausted: true,
                constraint: Constraint::Above,
                ..
            }
        ));
    }

    #[test]
    fn identical_enumerations_give_identity() {
        let mut iso = build_iso(EnumOrder::rationals(), EnumOrder::rationals());
        iso.run_until(200).unwrap();
        assert!(iso.state().pairs().all(|(a, b)| a == b));
        assert_eq!(iso.eval(&q(22, 7), 1 << 16).unwrap(), q(22, 7));
        assert!(iso.state().pairs().all(|(a, b)| a == b));
        let steps = iso.steps();
        assert_eq!(iso.eval(&q(22, 7), 0).unwrap(), q(22, 7));
        assert_eq!(iso.steps(), steps);
    }

    #[test]
    fn schedule_covers_prefixes() {
        let mut iso = build_iso(EnumOrder::rationals(), EnumOrder::rationals());
        iso.run_until(40).unwrap();
        let a: Vec<Quad> = iso.source().prefix(20).to_vec();
        let b: Vec<Quad> = iso.target().prefix(20).to_vec();
        assert!(a.iter().all(|x| iso.state().image(x).is_some()));
        assert!(b.iter().all(|y| iso.state().preimage(y).is_some()));
    }
}
