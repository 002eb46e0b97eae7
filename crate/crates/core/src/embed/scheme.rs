use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::One;

use super::metric::{select_epsilons, EpsilonSchedule, MetricPresentation, Point};
use super::EmbedError;
use crate::exactnum::{BitStream, Rational};

/// A node of the scheme: a clopen cell of census points with its code word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Census indices, ascending.
    pub members: Vec<usize>,
    pub code: Vec<bool>,
    /// Number of ancestors.
    pub depth: usize,
    /// Index `m` of the radius `ε_m` whose balls carved this cell out of its
    /// parent (0 for the root).
    pub level: usize,
    pub children: Vec<usize>,
}

/// A finite Cantor scheme over a census of points; leaves are singletons.
#[derive(Debug, Clone)]
pub struct CantorScheme {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    schedule: EpsilonSchedule,
    cells: Vec<Cell>,
    leaf_of: Vec<usize>,
    depth: usize,
}

impl CantorScheme {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn schedule(&self) -> &EpsilonSchedule {
        &self.schedule
    }

    /// Requested minimum code length.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn code_of(&self, i: usize) -> &[bool] {
        &self.cells[self.leaf_of[i]].code
    }

    pub fn max_code_len(&self) -> usize {
        (0..self.points.len()).map(|i| self.code_of(i).len()).max().unwrap_or(0)
    }

    /// `Σ 2^-|w|` over the code words of a cell's children, relative to the
    /// cell's own word.
    pub fn kraft_sum(&self, cell: usize) -> Rational {
        let c = &self.cells[cell];
        c.children
            .iter()
            .map(|&k| {
                let extra = self.cells[k].code.len() - c.code.len();
                Rational::new(BigInt::one(), BigInt::one() << extra)
            })
            .sum()
    }
}

/// Complete prefix code for `weights.len() ≥ 2` items, such that a word of
/// length `ℓ` goes to an item of weight at least `2^(need − ℓ)`. Groups are
/// split in two by placing items, heaviest first, on the lighter side; each
/// side must keep weight `2^(need − 1)`. `None` when that fails somewhere.
pub fn complete_code(weights: &[usize], need: usize) -> Option<Vec<Vec<bool>>> {
    fn floor_of(need: usize) -> u128 {
        if need == 0 { 0 } else { 1u128 << need.min(127) }
    }
    fn assign(items: &[usize], weights: &[usize], need: usize, prefix: &mut Vec<bool>, out: &mut [Vec<bool>]) -> bool {
        if let [only] = items {
            out[*only] = prefix.clone();
            return weights[*only] as u128 >= floor_of(need);
        }
        let mut sorted = items.to_vec();
        sorted.sort_by_key(|&i| (std::cmp::Reverse(weights[i]), i));
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let (mut wl, mut wr) = (0u128, 0u128);
        for i in sorted {
            if wl <= wr {
                left.push(i);
                wl += weights[i] as u128;
            } else {
                right.push(i);
                wr += weights[i] as u128;
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        let sub = need.saturating_sub(1);
        let mut ok = true;
        for (bit, side) in [(false, &left), (true, &right)] {
            prefix.push(bit);
            ok &= assign(side, weights, sub, prefix, out);
            prefix.pop();
        }
        ok
    }
    let mut out = vec![Vec::new(); weights.len()];
    let items: Vec<usize> = (0..weights.len()).collect();
    assign(&items, weights, need, &mut Vec::new(), &mut out).then_some(out)
}

/// Splits `members` by balls of radius `ε_m` around the first uncovered
/// member, in order.
fn carve(
    m: &MetricPresentation,
    points: &[Point],
    members: &[usize],
    threshold: &Rational,
) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = members.to_vec();
    let mut pieces = Vec::new();
    while let Some(&center) = rest.first() {
        let (inside, outside): (Vec<usize>, Vec<usize>) = rest.into_iter().partition(|&q| {
            let d = m.distance(&points[center], &points[q]);
            &d * &d < *threshold
        });
        pieces.push(inside);
        rest = outside;
    }
    pieces
}

/// Squared radius `ε_m² = 2 s² / 4^m`, for comparisons with squared
/// rational distances.
fn squared_eps(s: &EpsilonSchedule, level: usize) -> Rational {
    let four_m = Rational::from_integer(BigInt::one() << (2 * level));
    Rational::from_integer(2.into()) * &s.scale * &s.scale / four_m
}

/// Builds the scheme over the first `census` points, splitting every cell
/// with two or more members until all cells are singletons, every code at
/// least `depth` long. A cell is carved at finer radii until its pieces admit
/// such codes; this always succeeds once `census ≥ 2^depth`, and otherwise
/// the lightest piece of the finest carve is reported.
pub fn build_scheme(m: &mut MetricPresentation, depth: usize, census: usize) -> Result<CantorScheme, EmbedError> {
    let points = m.census(census);
    if points.len() < 2 {
        let p = points.first().map(|p| p.to_string()).unwrap_or_default();
        return Err(EmbedError::IsolatedPointWitness(p));
    }
    let schedule = select_epsilons(m, points.len())?;
    let mut cells = vec![Cell {
        members: (0..points.len()).collect(),
        code: Vec::new(),
        depth: 0,
        level: 0,
        children: Vec::new(),
    }];
    let mut leaf_of = vec![0; points.len()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let cell = cells[id].clone();
        if cell.members.len() == 1 {
            leaf_of[cell.members[0]] = id;
            continue;
        }
        // Children sit at depth + 1 and need diameter below ε_{depth+1};
        // balls of radius ε_level have diameter below 2 ε_level = ε_{level-1}.
        let mut level = (cell.level + 1).max(cell.depth + 2);
        let need = depth.saturating_sub(cell.code.len());
        let (pieces, words) = loop {
            let pieces = carve(m, &points, &cell.members, &squared_eps(&schedule, level));
            if pieces.len() >= 2 {
                let weights: Vec<usize> = pieces.iter().map(Vec::len).collect();
                if let Some(words) = complete_code(&weights, need) {
                    break (pieces, words);
                }
                if pieces.len() == cell.members.len() {
                    return Err(EmbedError::IsolatedPointWitness(points[cell.members[0]].to_string()));
                }
            }
            level += 1;
        };
        for (members, word) in pieces.into_iter().zip(words) {
            let mut code = cell.code.clone();
            code.extend(word);
            let child = cells.len();
            cells.push(Cell {
                members,
                code,
                depth: cell.depth + 1,
                level,
                children: Vec::new(),
            });
            cells[id].children.push(child);
            queue.push_back(child);
        }
    }
    let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(CantorScheme {
        points,
        index,
        schedule,
        cells,
        leaf_of,
        depth,
    })
}

/// Code word of the point followed by zeros.
pub fn embed_eval(s: &CantorScheme, id: &Point) -> Result<BitStream, EmbedError> {
    let i = *s.index.get(id).ok_or_else(|| EmbedError::UnknownPoint(id.to_string()))?;
    Ok(BitStream::finite(s.code_of(i).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Quad};
    use std::collections::HashSet;

    fn kraft(words: &[Vec<bool>]) -> Rational {
        words.iter().map(|w| Rational::new(BigInt::one(), BigInt::one() << w.len())).sum()
    }

    #[test]
    fn codes_are_complete_and_prefix_free() {
        for (weights, need) in [(vec![1, 1], 1), (vec![1, 1, 1], 0), (vec![5, 1, 1, 9, 2], 3), (vec![1; 7], 2)] {
            let words = complete_code(&weights, need).unwrap();
            assert_eq!(kraft(&words), rat(1, 1));
            for (i, a) in words.iter().enumerate() {
                for (j, b) in words.iter().enumerate() {
                    assert!(i == j || !b.starts_with(a));
                }
                assert!(weights[i] << a.len() >= 1 << need);
            }
        }
    }

    #[test]
    fn light_pieces_force_refinement() {
        assert_eq!(complete_code(&[1, 1000], 9), None);
        assert!(complete_code(&[1; 4], 3).is_none());
        assert!(complete_code(&[1; 8], 3).is_some());
    }

    #[test]
    fn two_point_space() {
        let pts = vec![Point::Label("a".into()), Point::Label("b".into())];
        let mut m = MetricPresentation::new("pair", pts.into_iter(), |p, q| if p == q { rat(0, 1) } else { rat(1, 1) });
        let s = build_scheme(&mut m, 1, 2).unwrap();
        let a = embed_eval(&s, &Point::Label("a".into())).unwrap();
        let b = embed_eval(&s, &Point::Label("b".into())).unwrap();
        assert_eq!(a.prefix(1), vec![false]);
        assert_eq!(b.prefix(1), vec![true]);
        assert_eq!(embed_eval(&s, &Point::Label("a".into())).unwrap().prefix(8), a.prefix(8));
    }

    #[test]
    fn single_point_cannot_split() {
        let mut m = MetricPresentation::new("pt", std::iter::once(Point::Label("p".into())), |_, _| rat(0, 1));
        assert!(matches!(build_scheme(&mut m, 1, 4), Err(EmbedError::IsolatedPointWitness(_))));
    }

    #[test]
    fn rationals_scheme_is_dense_at_depth_six() {
        let mut m = MetricPresentation::q01();
        let s = build_scheme(&mut m, 6, 512).unwrap();
        let prefixes: HashSet<Vec<bool>> = (0..512).map(|i| s.code_of(i)[..6].to_vec()).collect();
        assert_eq!(prefixes.len(), 64);
        let codes: HashSet<&[bool]> = (0..512).map(|i| s.code_of(i)).collect();
        assert_eq!(codes.len(), 512);
        for (id, c) in s.cells().iter().enumerate() {
            if !c.children.is_empty() {
                assert_eq!(s.kraft_sum(id), rat(1, 1));
            }
            if c.depth > 0 {
                let eps = s.schedule().eps(c.depth);
                for &a in &c.members {
                    for &b in &c.members {
                        let d = m.distance(&s.points()[a], &s.points()[b]);
                        assert!(Quad::from(d) < eps);
                    }
                }
            }
        }
    }
}
