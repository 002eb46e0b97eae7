//! Canonical form for block unions: tight bounds, sorted, merged where a
//! single block can describe the union, overlaps resolved by cutting.

use std::cmp::Ordering;

use super::block::{Block, Carrier, Membership, TIGHTEN_DEPTH};
use super::frame::{Location, Side};
use crate::exactnum::Quad;

const MAX_ROUNDS: usize = 100_000;

/// Normal form of a list of blocks. Pairs that cannot be resolved (interior
/// overlap of incomparable carriers, or undecidable Cantor cuts) are left in
/// place; see [`first_overlap`].
pub fn normalize_blocks(blocks: &[Block]) -> Vec<Block> {
    let mut work: Vec<Block> = Vec::new();
    for b in blocks {
        match &b.carrier {
            Carrier::FinitePoints(ps) if ps.len() > 1 => {
                for p in ps {
                    let single = Carrier::FinitePoints(vec![p.clone()]);
                    push_tight(
                        &mut work,
                        Block::new(b.lo.clone(), b.hi.clone(), b.lo_closed, b.hi_closed, single),
                    );
                }
            }
            _ => push_tight(&mut work, b.clone()),
        }
    }
    let mut rounds = 0;
    'outer: loop {
        work.sort_by(block_order);
        rounds += 1;
        if rounds > MAX_ROUNDS {
            break;
        }
        for i in 0..work.len() {
            for j in i + 1..work.len() {
                if let Some(replacement) = resolve(&work[i], &work[j]) {
                    work.remove(j);
                    work.remove(i);
                    for b in replacement {
                        push_tight(&mut work, b);
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    work.sort_by(block_order);
    work
}

/// First pair of blocks whose intervals still intersect.
pub fn first_overlap(blocks: &[Block]) -> Option<(usize, usize)> {
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if intervals_intersect(&blocks[i], &blocks[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn push_tight(work: &mut Vec<Block>, b: Block) {
    match b.clone().tighten() {
        Ok(Some(t)) => match split_isolated_end(&t) {
            Some((point, rest)) => {
                work.push(point);
                push_tight(work, rest);
            }
            None => work.push(t),
        },
        Ok(None) => {}
        Err(_) => work.push(b),
    }
}

/// A Cantor-type block whose closed lower bound is the left end of a
/// deleted interval (or whose closed upper bound is a right end) has that
/// bound as an isolated point; it is split off as a point block.
fn split_isolated_end(b: &Block) -> Option<(Block, Block)> {
    let frame = b.carrier.frame()?;
    let (lo, hi) = (b.lo.as_ref()?, b.hi.as_ref()?);
    if b.lo_closed {
        if let Location::GapEndpoint(g, Side::Left) = frame.locate(&Quad::from(lo), TIGHTEN_DEPTH) {
            if &g.hi <= hi {
                let rest = b.with_bounds(Some(g.hi), true, b.hi.clone(), b.hi_closed);
                return Some((Block::point(lo.clone()), rest));
            }
        }
    }
    if b.hi_closed {
        if let Location::GapEndpoint(g, Side::Right) = frame.locate(&Quad::from(hi), TIGHTEN_DEPTH) {
            if &g.lo >= lo {
                let rest = b.with_bounds(b.lo.clone(), b.lo_closed, Some(g.lo), true);
                return Some((Block::point(hi.clone()), rest));
            }
        }
    }
    None
}

fn cmp_lower(a: &Block, b: &Block) -> Ordering {
    match (&a.lo, &b.lo) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y).then_with(|| b.lo_closed.cmp(&a.lo_closed)),
    }
}

fn cmp_upper(a: &Block, b: &Block) -> Ordering {
    match (&a.hi, &b.hi) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y).then_with(|| a.hi_closed.cmp(&b.hi_closed)),
    }
}

/// Sort key: lower bound, then upper bound.
pub(crate) fn block_order(a: &Block, b: &Block) -> Ordering {
    cmp_lower(a, b).then_with(|| cmp_upper(a, b))
}

fn intervals_intersect(a: &Block, b: &Block) -> bool {
    // a's lower end must not exceed b's upper end and vice versa.
    let below = |x: &Block, y: &Block| match (&x.lo, &y.hi) {
        (None, _) | (_, None) => true,
        (Some(l), Some(h)) => l < h || (l == h && x.lo_closed && y.hi_closed),
    };
    below(a, b) && below(b, a)
}

fn interval_subset(inner: &Block, outer: &Block) -> bool {
    cmp_lower(outer, inner) != Ordering::Greater && cmp_upper(inner, outer) != Ordering::Greater
}

fn block_subset(inner: &Block, outer: &Block) -> bool {
    if inner.is_point() {
        let p = inner.lo.clone().expect("point");
        return outer.contains(&Quad::from(p), TIGHTEN_DEPTH) == Membership::In;
    }
    interval_subset(inner, outer)
        && matches!(
            outer.carrier.compare_inclusion(&inner.carrier),
            Some(Ordering::Greater | Ordering::Equal)
        )
}

/// `a` and `b` sorted so `a` starts first; true when their union is one interval.
fn connects(a: &Block, b: &Block) -> bool {
    if intervals_intersect(a, b) {
        return true;
    }
    let (first, second) = if cmp_lower(a, b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    matches!((&first.hi, &second.lo), (Some(h), Some(l)) if h == l && (first.hi_closed || second.lo_closed))
}

fn hull(a: &Block, b: &Block) -> Block {
    let lower = if cmp_lower(a, b) == Ordering::Greater { b } else { a };
    let upper = if cmp_upper(a, b) == Ordering::Less { b } else { a };
    Block::new(
        lower.lo.clone(),
        upper.hi.clone(),
        lower.lo_closed,
        upper.hi_closed,
        a.carrier.clone(),
    )
}

/// The part of `block` outside the interval of `cut`.
fn subtract_interval(block: &Block, cut: &Block) -> Vec<Block> {
    let mut out = Vec::new();
    if let Some(cl) = &cut.lo {
        let below = block.lo.as_ref().is_none_or(|l| l < cl || (l == cl && block.lo_closed && !cut.lo_closed));
        if below {
            let (hi, hi_closed) = match &block.hi {
                Some(h) if h < cl => (h.clone(), block.hi_closed),
                _ => (cl.clone(), !cut.lo_closed),
            };
            out.push(block.with_bounds(block.lo.clone(), block.lo_closed, Some(hi), hi_closed));
        }
    }
    if let Some(ch) = &cut.hi {
        let above = block.hi.as_ref().is_none_or(|h| h > ch || (h == ch && block.hi_closed && !cut.hi_closed));
        if above {
            let (lo, lo_closed) = match &block.lo {
                Some(l) if l > ch => (l.clone(), block.lo_closed),
                _ => (ch.clone(), !cut.hi_closed),
            };
            out.push(block.with_bounds(Some(lo), lo_closed, block.hi.clone(), block.hi_closed));
        }
    }
    out
}

fn all_tight(pieces: Vec<Block>) -> Option<Vec<Block>> {
    let mut out = Vec::new();
    for p in pieces {
        match p.tighten() {
            Ok(Some(t)) => out.push(t),
            Ok(None) => {}
            Err(_) => return None,
        }
    }
    Some(out)
}

fn resolve(a: &Block, b: &Block) -> Option<Vec<Block>> {
    if a == b {
        return Some(vec![a.clone()]);
    }
    if block_subset(b, a) {
        return Some(vec![a.clone()]);
    }
    if block_subset(a, b) {
        return Some(vec![b.clone()]);
    }
    let mergeable = a.carrier == b.carrier && !matches!(a.carrier, Carrier::FinitePoints(_));
    if mergeable && connects(a, b) {
        return Some(vec![hull(a, b)]);
    }
    for (host, pt) in [(a, b), (b, a)] {
        if !pt.is_point() || host.is_point() {
            continue;
        }
        let p = pt.lo.clone().expect("point");
        // A point sitting on an open end of a block whose carrier has it.
        let closed = if host.lo.as_ref() == Some(&p) && !host.lo_closed {
            Some(host.with_bounds(host.lo.clone(), true, host.hi.clone(), host.hi_closed))
        } else if host.hi.as_ref() == Some(&p) && !host.hi_closed {
            Some(host.with_bounds(host.lo.clone(), host.lo_closed, host.hi.clone(), true))
        } else {
            None
        };
        if let Some(candidate) = closed {
            if candidate.contains(&Quad::from(&p), TIGHTEN_DEPTH) == Membership::In {
                return Some(vec![candidate]);
            }
            continue;
        }
        // A non-member point strictly inside: cut the host there.
        if host.interior_contains(&p) {
            if host.contains(&Quad::from(&p), TIGHTEN_DEPTH) == Membership::UnknownAtDepth {
                return None;
            }
            let cut = Block::point(p.clone());
            let mut pieces = all_tight(subtract_interval(host, &cut))?;
            pieces.push(pt.clone());
            return Some(pieces);
        }
    }
    if !intervals_intersect(a, b) {
        return None;
    }
    match a.carrier.compare_inclusion(&b.carrier) {
        Some(Ordering::Greater) => {
            let mut pieces = all_tight(subtract_interval(b, a))?;
            pieces.push(a.clone());
            Some(pieces)
        }
        Some(Ordering::Less) => {
            let mut pieces = all_tight(subtract_interval(a, b))?;
            pieces.push(b.clone());
            Some(pieces)
        }
        _ => {
            // Incomparable carriers sharing exactly one closed endpoint.
            let (first, second) = if cmp_lower(a, b) == Ordering::Greater {
                (b, a)
            } else {
                (a, b)
            };
            match (&first.hi, &second.lo) {
                (Some(h), Some(l)) if h == l && first.hi_closed && second.lo_closed => {
                    let opened = second.with_bounds(second.lo.clone(), false, second.hi.clone(), second.hi_closed);
                    let mut pieces = all_tight(vec![opened])?;
                    pieces.push(first.clone());
                    Some(pieces)
                }
                _ => None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::setdsl::frame::CantorFrame;

    fn reals(lo: i64, hi: i64) -> Block {
        Block::closed(rat(lo, 1), rat(hi, 1), Carrier::Reals)
    }

    #[test]
    fn merges_at_shared_endpoint() {
        let out = normalize_blocks(&[reals(1, 2), reals(0, 1)]);
        assert_eq!(out, vec![reals(0, 2)]);
    }

    #[test]
    fn absorbs_subsets() {
        let q = Block::closed(rat(0, 1), rat(1, 1), Carrier::Rationals);
        assert_eq!(normalize_blocks(&[q, reals(0, 1)]), vec![reals(0, 1)]);
    }

    #[test]
    fn idempotent() {
        let q = Block::closed(rat(0, 1), rat(2, 1), Carrier::Rationals);
        let once = normalize_blocks(&[q, reals(1, 3)]);
        assert_eq!(normalize_blocks(&once), once);
        assert_eq!(once.len(), 2);
        assert!(!once[0].hi_closed);
    }

    #[test]
    fn cuts_host_at_foreign_point() {
        let d = Block::new(Some(rat(0, 1)), Some(rat(1, 1)), false, false, Carrier::Dyadics);
        let out = normalize_blocks(&[d, Block::point(rat(1, 3))]);
        assert_eq!(out.len(), 3);
        assert!(first_overlap(&out).is_none());
    }

    #[test]
    fn point_closes_open_end() {
        let q = Block::new(Some(rat(0, 1)), Some(rat(1, 1)), false, false, Carrier::Rationals);
        let out = normalize_blocks(&[q, Block::point(rat(1, 1))]);
        assert_eq!(out.len(), 1);
        assert!(out[0].hi_closed);
    }

    #[test]
    fn reals_carve_cantor() {
        let c = Block::closed(rat(0, 1), rat(1, 1), Carrier::Cantor(CantorFrame::middle_thirds()));
        let r = Block::closed(rat(1, 4), rat(1, 2), Carrier::Reals);
        let out = normalize_blocks(&[c, r]);
        assert!(first_overlap(&out).is_none(), "{out:?}");
        assert_eq!(out.len(), 3);
        assert_eq!(out[2].lo, Some(rat(2, 3)));
    }

    #[test]
    fn incomparable_overlap_is_left() {
        let c = Block::closed(rat(0, 1), rat(1, 1), Carrier::Cantor(CantorFrame::middle_thirds()));
        let q = Block::closed(rat(0, 1), rat(1, 1), Carrier::Rationals);
        let out = normalize_blocks(&[c, q]);
        assert!(first_overlap(&out).is_some());
    }

    #[test]
    fn isolated_cantor_end_split_off() {
        let frame = CantorFrame::middle_thirds();
        let b = Block::closed(rat(1, 3), rat(1, 1), Carrier::Cantor(frame));
        let out = normalize_blocks(&[b]);
        assert_eq!(out.len(), 2);
        assert!(out[0].is_point());
        assert_eq!(out[1].lo, Some(rat(2, 3)));
    }
}
