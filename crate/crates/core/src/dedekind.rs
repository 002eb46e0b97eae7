//! Extension of an order isomorphism between dense subsets to their
//! completions, reported as brackets, and the resulting order isomorphisms
//! between Cantor-like sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::backforth::{build_iso, BackForthError, Claims, EnumOrder, LazyIso};
pub use crate::exactnum::Bracket;
use crate::exactnum::{Quad, Rational};
use crate::gaps::{characterize, classify_gaps, Gap, GapFamily, GapKind, VerdictKind};
use crate::setdsl::{CantorFrame, Carrier, Extended, Location, Membership, RationalStream, SetExpr, Side};

/// Descent depth for membership and location questions.
pub const DESCENT_DEPTH: usize = 512;

/// Schedule steps allowed when evaluating a back-and-forth base map.
pub const ISO_STEPS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DedekindError {
    #[error("{0} is not in the domain")]
    NotInDomain(Box<Quad>),
    #[error("{set} is not order-homeomorphic to the Cantor set ({verdict}): {}", .justification.join("; "))]
    Precondition {
        set: String,
        verdict: VerdictKind,
        justification: Vec<String>,
    },
    #[error("no bracket of the requested width after enumerating {scanned} base points")]
    BudgetExhausted { scanned: usize },
    #[error("precision must be positive")]
    NonPositiveEpsilon,
    #[error(transparent)]
    BackForth(#[from] BackForthError),
}

/// An order isomorphism `A -> B` between dense subsets, evaluable exactly
/// on `A`.
pub trait BaseMap: Send {
    fn image(&mut self, a: &Quad) -> Result<Quad, DedekindError>;
    /// Element `i` of a fixed enumeration of `A`.
    fn domain_element(&mut self, i: usize) -> Option<Quad>;
    fn in_domain(&mut self, x: &Quad) -> bool;
    /// A bracket of width at most `eps` around the image of a non-base
    /// point, when the map can find one without enumerating.
    fn refine(&mut self, _x: &Quad, _eps: &Quad) -> Option<Bracket> {
        None
    }
}

/// A back-and-forth isomorphism whose source is described by a set
/// expression (used for membership in `A`).
pub struct IsoBase {
    iso: LazyIso,
    source_set: SetExpr,
}

impl IsoBase {
    pub fn new(iso: LazyIso, source_set: SetExpr) -> Self {
        IsoBase { iso, source_set }
    }
}

impl BaseMap for IsoBase {
    fn image(&mut self, a: &Quad) -> Result<Quad, DedekindError> {
        Ok(self.iso.eval(a, ISO_STEPS)?)
    }

    fn domain_element(&mut self, i: usize) -> Option<Quad> {
        self.iso.source().get(i).cloned()
    }

    fn in_domain(&mut self, x: &Quad) -> bool {
        self.source_set.contains_quad(x, DESCENT_DEPTH) == Membership::In
    }
}

/// The unique extension of a base map to the completion, evaluated by
/// brackets.
pub struct CompletionMap {
    base: Box<dyn BaseMap>,
    domain: SetExpr,
    codomain: SetExpr,
    seen: BTreeSet<Quad>,
    enumerated: usize,
}

impl fmt::Debug for CompletionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompletionMap")
            .field("domain", &self.domain.to_string())
            .field("codomain", &self.codomain.to_string())
            .field("enumerated", &self.enumerated)
            .finish()
    }
}

impl CompletionMap {
    pub fn new(base: Box<dyn BaseMap>, domain: SetExpr, codomain: SetExpr) -> Self {
        CompletionMap {
            base,
            domain,
            codomain,
            seen: BTreeSet::new(),
            enumerated: 0,
        }
    }

    pub fn domain(&self) -> &SetExpr {
        &self.domain
    }

    pub fn codomain(&self) -> &SetExpr {
        &self.codomain
    }

    /// Exact image of a base point.
    pub fn base_image(&mut self, a: &Quad) -> Result<Quad, DedekindError> {
        self.base.image(a)
    }

    /// Exact image when `x` is a base point; otherwise the images of the
    /// closest enumerated base points on either side, enumerating more
    /// (doubling, up to `budget` in total) until they are within `eps`.
    pub fn extend_eval(&mut self, x: &Quad, eps: &Quad, budget: usize) -> Result<Bracket, DedekindError> {
        if !eps.is_positive() {
            return Err(DedekindError::NonPositiveEpsilon);
        }
        if self.domain.contains_quad(x, DESCENT_DEPTH) == Membership::Out {
            return Err(DedekindError::NotInDomain(Box::new(x.clone())));
        }
        if self.base.in_domain(x) {
            return Ok(Bracket::exact(self.base.image(x)?));
        }
        if let Some(b) = self.base.refine(x, eps) {
            return Ok(b);
        }
        let mut target = self.enumerated.max(64);
        loop {
            while self.enumerated < target.min(budget) {
                match self.base.domain_element(self.enumerated) {
                    Some(a) => {
                        self.seen.insert(a);
                        self.enumerated += 1;
                    }
                    None => break,
                }
            }
            let below = self.seen.range(..x.clone()).next_back().cloned();
            let above = self.seen.range(x.clone()..).find(|a| *a != x).cloned();
            if let (Some(a1), Some(a2)) = (below, above) {
                let b = Bracket {
                    lo: self.base.image(&a1)?,
                    hi: self.base.image(&a2)?,
                };
                if &b.width() <= eps {
                    return Ok(b);
                }
            }
            if self.enumerated >= budget || target > self.enumerated {
                return Err(DedekindError::BudgetExhausted {
                    scanned: self.enumerated,
                });
            }
            target = self.enumerated * 2;
        }
    }
}

pub fn extend_eval(m: &mut CompletionMap, x: &Quad, eps: &Quad, budget: usize) -> Result<Bracket, DedekindError> {
    m.extend_eval(x, eps, budget)
}

/// Position of a point within `E_X = L ∪ R ∪ {a, b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndpointRole {
    Inf,
    Sup,
    /// Left end of a gap; `partner` is the right end.
    Left { partner: Rational },
    Right { partner: Rational },
    NotEndpoint,
}

/// Gap endpoints of a set order-homeomorphic to the Cantor set.
#[derive(Debug, Clone)]
pub struct GapEndpoints {
    set: SetExpr,
    pub a: Rational,
    pub b: Rational,
    explicit: Vec<Gap>,
    families: Vec<GapFamily>,
}

fn require_cantor_like(e: &SetExpr) -> Result<(), DedekindError> {
    let v = characterize(e);
    if v.kind == VerdictKind::OrderHomeoToC {
        return Ok(());
    }
    Err(DedekindError::Precondition {
        set: e.to_string(),
        verdict: v.kind,
        justification: v.justification,
    })
}

pub fn gap_endpoints(e: &SetExpr) -> Result<GapEndpoints, DedekindError> {
    require_cantor_like(e)?;
    let report = classify_gaps(e);
    let bounds = e.bounds().expect("a Cantor-like set is nonempty");
    let finite = |x: Extended| match x {
        Extended::Finite(r) => r,
        _ => unreachable!("compact sets are bounded"),
    };
    Ok(GapEndpoints {
        set: e.clone(),
        a: finite(bounds.inf),
        b: finite(bounds.sup),
        explicit: report.explicit,
        families: report
            .families
            .into_iter()
            .filter(|f| f.kind == GapKind::Essential)
            .collect(),
    })
}

impl GapEndpoints {
    pub fn set(&self) -> &SetExpr {
        &self.set
    }

    /// Gaps as (left, right) pairs: the gaps between blocks first, then the
    /// gaps inside blocks by generation, blocks interleaved left to right.
    pub fn pairs(&self) -> impl Iterator<Item = (Rational, Rational)> + Send {
        let explicit: Vec<(Rational, Rational)> =
            self.explicit.iter().map(|g| (g.lo.clone(), g.hi.clone())).collect();
        let streams: Vec<RationalStream> = self
            .families
            .iter()
            .filter_map(|f| f.stream())
            .map(|s| Box::new(s.flat_map(|g| [g.lo, g.hi])) as RationalStream)
            .collect();
        explicit.into_iter().chain(PairRoundRobin { streams, cursor: 0 })
    }

    pub fn left(&self) -> impl Iterator<Item = Rational> + Send {
        self.pairs().map(|(l, _)| l)
    }

    pub fn right(&self) -> impl Iterator<Item = Rational> + Send {
        self.pairs().map(|(_, r)| r)
    }

    /// `a`, `b`, then each gap's two ends.
    pub fn all(&self) -> impl Iterator<Item = Rational> + Send {
        [self.a.clone(), self.b.clone()]
            .into_iter()
            .chain(self.pairs().flat_map(|(l, r)| [l, r]))
    }

    pub fn role(&self, x: &Quad) -> EndpointRole {
        let Some(x) = x.as_rational() else {
            return EndpointRole::NotEndpoint;
        };
        if *x == self.a {
            return EndpointRole::Inf;
        }
        if *x == self.b {
            return EndpointRole::Sup;
        }
        for g in &self.explicit {
            if *x == g.lo {
                return EndpointRole::Left { partner: g.hi.clone() };
            }
            if *x == g.hi {
                return EndpointRole::Right { partner: g.lo.clone() };
            }
        }
        for f in &self.families {
            if !f.host_contains(x) {
                continue;
            }
            let Some(frame) = f.block.carrier.frame() else {
                continue;
            };
            if let Location::GapEndpoint(g, side) = frame.locate(&Quad::from(x), DESCENT_DEPTH) {
                return match side {
                    Side::Left => EndpointRole::Left { partner: g.hi },
                    Side::Right => EndpointRole::Right { partner: g.lo },
                };
            }
        }
        EndpointRole::NotEndpoint
    }
}

/// Round-robin over streams of flattened pairs, taking whole pairs.
struct PairRoundRobin {
    streams: Vec<RationalStream>,
    cursor: usize,
}

impl Iterator for PairRoundRobin {
    type Item = (Rational, Rational);

    fn next(&mut self) -> Option<(Rational, Rational)> {
        while !self.streams.is_empty() {
            let i = self.cursor % self.streams.len();
            let s = &mut self.streams[i];
            match (s.next(), s.next()) {
                (Some(l), Some(r)) => {
                    self.cursor = i + 1;
                    return Some((l, r));
                }
                _ => {
                    drop(self.streams.remove(i));
                    self.cursor = i;
                }
            }
        }
        None
    }
}

/// Same-path matching of two full Cantor frames: the gap reached by a path
/// of left/right choices goes to the gap with the same path.
struct CantorMatching {
    from: CantorFrame,
    to: CantorFrame,
    enumeration: Vec<Quad>,
    source: RationalStream,
}

impl CantorMatching {
    fn new(from: CantorFrame, to: CantorFrame) -> Self {
        let heads = [from.lo.clone(), from.hi.clone()].into_iter();
        let gaps = from.gaps(None).flat_map(|g| [g.lo, g.hi]);
        CantorMatching {
            from,
            to,
            enumeration: Vec::new(),
            source: Box::new(heads.chain(gaps)),
        }
    }
}

impl BaseMap for CantorMatching {
    fn image(&mut self, a: &Quad) -> Result<Quad, DedekindError> {
        match self.from.locate(a, DESCENT_DEPTH) {
            Location::FrameEndpoint(Side::Left) => Ok(Quad::from(&self.to.lo)),
            Location::FrameEndpoint(Side::Right) => Ok(Quad::from(&self.to.hi)),
            Location::GapEndpoint(g, side) => Ok(Quad::from(self.to.gap_at(&g.path).endpoint(side))),
            _ => Err(DedekindError::NotInDomain(Box::new(a.clone()))),
        }
    }

    fn domain_element(&mut self, i: usize) -> Option<Quad> {
        while self.enumeration.len() <= i {
            self.enumeration.push(Quad::from(self.source.next()?));
        }
        self.enumeration.get(i).cloned()
    }

    fn in_domain(&mut self, x: &Quad) -> bool {
        x.is_rational()
            && matches!(
                self.from.locate(x, DESCENT_DEPTH),
                Location::FrameEndpoint(_) | Location::GapEndpoint(..)
            )
    }

    /// Lock-step descent: the cell of `x` in the source frame and the cell
    /// with the same path in the target, until the latter is narrow enough.
    fn refine(&mut self, x: &Quad, eps: &Quad) -> Option<Bracket> {
        let (mut fa, mut fb) = (self.from.lo.clone(), self.from.hi.clone());
        let (mut ta, mut tb) = (self.to.lo.clone(), self.to.hi.clone());
        for _ in 0..DESCENT_DEPTH {
            if Quad::from(&tb - &ta) <= *eps {
                return Some(Bracket {
                    lo: Quad::from(ta),
                    hi: Quad::from(tb),
                });
            }
            let flen = (&fb - &fa) * &self.from.ratio;
            let tlen = (&tb - &ta) * &self.to.ratio;
            if *x < Quad::from(&fa + &flen) {
                fb = &fa + flen;
                tb = &ta + tlen;
            } else if *x > Quad::from(&fb - &flen) {
                fa = &fb - flen;
                ta = &tb - tlen;
            } else {
                return None;
            }
        }
        None
    }
}

/// Back-and-forth on left gap endpoints; right endpoints follow their gap.
struct GapMatching {
    from: GapEndpoints,
    to: GapEndpoints,
    lefts: LazyIso,
    enumeration: Vec<Quad>,
    source: Box<dyn Iterator<Item = Rational> + Send>,
}

impl GapMatching {
    fn new(from: GapEndpoints, to: GapEndpoints) -> Self {
        let lefts = build_iso(
            EnumOrder::from_rationals("L(X)", from.left(), Claims::ALL),
            EnumOrder::from_rationals("L(Y)", to.left(), Claims::ALL),
        );
        let source = Box::new(from.all());
        GapMatching {
            from,
            to,
            lefts,
            enumeration: Vec::new(),
            source,
        }
    }

    fn left_image(&mut self, l: &Rational) -> Result<Quad, DedekindError> {
        Ok(self.lefts.eval(&Quad::from(l), ISO_STEPS)?)
    }
}

impl BaseMap for GapMatching {
    fn image(&mut self, a: &Quad) -> Result<Quad, DedekindError> {
        match self.from.role(a) {
            EndpointRole::Inf => Ok(Quad::from(&self.to.a)),
            EndpointRole::Sup => Ok(Quad::from(&self.to.b)),
            EndpointRole::Left { .. } => self.left_image(a.as_rational().expect("endpoints are rational")),
            EndpointRole::Right { partner } => {
                let l = self.left_image(&partner)?;
                match self.to.role(&l) {
                    EndpointRole::Left { partner } => Ok(Quad::from(partner)),
                    _ => unreachable!("left endpoints map to left endpoints"),
                }
            }
            EndpointRole::NotEndpoint => Err(DedekindError::NotInDomain(Box::new(a.clone()))),
        }
    }

    fn domain_element(&mut self, i: usize) -> Option<Quad> {
        while self.enumeration.len() <= i {
            self.enumeration.push(Quad::from(self.source.next()?));
        }
        self.enumeration.get(i).cloned()
    }

    fn in_domain(&mut self, x: &Quad) -> bool {
        self.from.role(x) != EndpointRole::NotEndpoint
    }
}

/// A single Cantor block spanning its whole frame.
fn full_frame(e: &SetExpr) -> Option<CantorFrame> {
    match e.blocks() {
        [b] => match &b.carrier {
            Carrier::Cantor(f) if b.lo.as_ref() == Some(&f.lo) && b.hi.as_ref() == Some(&f.hi) => Some(f.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// The order isomorphism `X -> Y` of two sets order-homeomorphic to the
/// Cantor set, built on their gap endpoints and extended to the whole set.
pub fn brouwer_map(x: &SetExpr, y: &SetExpr) -> Result<CompletionMap, DedekindError> {
    let ex = gap_endpoints(x)?;
    let ey = gap_endpoints(y)?;
    let base: Box<dyn BaseMap> = match (full_frame(x), full_frame(y)) {
        (Some(fx), Some(fy)) => Box::new(CantorMatching::new(fx, fy)),
        _ => Box::new(GapMatching::new(ex, ey)),
    };
    Ok(CompletionMap::new(base, x.clone(), y.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Quad};

    fn set(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Quad {
        Quad::from(rat(n, d))
    }

    fn identity_on_q() -> CompletionMap {
        let iso = build_iso(EnumOrder::rationals(), EnumOrder::rationals());
        CompletionMap::new(Box::new(IsoBase::new(iso, set("Q"))), set("R"), set("R"))
    }

    #[test]
    fn base_points_are_exact() {
        let mut m = identity_on_q();
        assert_eq!(m.extend_eval(&q(0, 1), &q(1, 10), 1000).unwrap(), Bracket::exact(q(0, 1)));
    }

    #[test]
    fn irrational_bracket_and_nesting() {
        let mut m = identity_on_q();
        let x = Quad::new(rat(1, 1), rat(1, 1));
        let mut prev: Option<Bracket> = None;
        for d in [10, 100, 1000] {
            let b = m.extend_eval(&x, &q(1, d), 1 << 16).unwrap();
            assert!(b.contains(&x));
            assert!(b.width() <= q(1, d));
            if let Some(p) = &prev {
                assert!(b.within(p));
            }
            prev = Some(b);
        }
    }

    #[test]
    fn endpoints_of_cantor_sets() {
        let c = gap_endpoints(&set("C")).unwrap();
        assert_eq!((c.a.clone(), c.b.clone()), (rat(0, 1), rat(1, 1)));
        let first: Vec<_> = c.pairs().take(3).collect();
        assert_eq!(
            first,
            vec![(rat(1, 3), rat(2, 3)), (rat(1, 9), rat(2, 9)), (rat(7, 9), rat(8, 9))]
        );
        let f = gap_endpoints(&set("[0,1]&cantor(2/5)")).unwrap();
        assert_eq!(f.pairs().next().unwrap(), (rat(2, 5), rat(3, 5)));
        assert!(matches!(gap_endpoints(&set("[0,1]")), Err(DedekindError::Precondition { .. })));
    }

    #[test]
    fn thirds_to_fifths() {
        let mut m = brouwer_map(&set("C"), &set("[0,1]&cantor(2/5)")).unwrap();
        let eps = q(1, 1000);
        for (x, y) in [(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)), (q(1, 3), q(2, 5)), (q(2, 3), q(3, 5))] {
            assert_eq!(m.extend_eval(&x, &eps, 1000).unwrap(), Bracket::exact(y));
        }
        let b = m.extend_eval(&q(1, 4), &eps, 1 << 16).unwrap();
        assert!(b.width() <= eps);
        assert!(m.extend_eval(&q(1, 2), &eps, 1000).is_err());
    }

    #[test]
    fn identity_on_cantor() {
        let mut m = brouwer_map(&set("C"), &set("C")).unwrap();
        for x in [q(1, 9), q(8, 9), q(20, 27)] {
            assert_eq!(m.extend_eval(&x, &q(1, 100), 1000).unwrap(), Bracket::exact(x));
        }
    }

    #[test]
    fn generic_matching_preserves_roles() {
        let split = set("[0,1/3]&cantor(1/3)@[0,1] u [2/3,1]&cantor(1/3)@[0,1]");
        assert_eq!(split.blocks().len(), 2);
        let mut m = brouwer_map(&split, &set("[0,1]&cantor(2/5)")).unwrap();
        let ey = gap_endpoints(&set("[0,1]&cantor(2/5)")).unwrap();
        let ex = gap_endpoints(&split).unwrap();
        let mut images = Vec::new();
        for x in ex.all().take(40) {
            let b = m.extend_eval(&Quad::from(&x), &q(1, 100), 1000).unwrap();
            assert!(b.is_degenerate());
            let role_x = ex.role(&Quad::from(&x));
            let role_y = ey.role(&b.lo);
            assert_eq!(
                std::mem::discriminant(&role_x),
                std::mem::discriminant(&role_y),
                "{x} -> {}",
                b.lo
            );
            images.push((x, b.lo));
        }
        images.sort();
        assert!(images.windows(2).all(|w| w[0].1 < w[1].1));
    }
}
