use std::cmp::Ordering;

use super::metric::{select_epsilons, MetricPresentation, Point};
use super::scheme::{build_scheme, CantorScheme};
use super::EmbedError;
use crate::backforth::{EnumOrder, PartialIso};
use crate::cantor::{avoid_translation, decode, encode_prefix, xor_add, CantorPoint};
use crate::exactnum::{Quad, Rational};
use crate::setdsl::SetExpr;

/// Output of [`sierpinski_map`] with the intermediate data needed to audit it.
pub struct SierpinskiMap {
    pub space: String,
    /// Census size of the scheme that succeeded.
    pub census: usize,
    pub depth: usize,
    /// Longest leaf code; translated images differ within this many bits.
    pub code_len: usize,
    pub scheme: CantorScheme,
    /// Scheme images of the first `n_points` ids.
    pub images: Vec<CantorPoint>,
    /// The translation `x` with `(f(X) ⊕ x) ∩ E = ∅`.
    pub shift: CantorPoint,
    pub translated: Vec<CantorPoint>,
    /// `(id, value)` in enumeration order of the ids.
    pub pairs: Vec<(Point, Rational)>,
}

impl SierpinskiMap {
    /// Lexicographic order of two translated images.
    pub fn lex_cmp(&self, i: usize, j: usize) -> Ordering {
        self.translated[i].prefix(self.code_len).cmp(&self.translated[j].prefix(self.code_len))
    }
}

/// Census-scale isolation test: a point none of whose census neighbours is
/// closer than the schedule scale is reported.
fn isolated_at_scale(m: &MetricPresentation, pts: &[Point], n: usize, scale: &Rational) -> Option<Point> {
    pts.iter().take(n).find_map(|p| {
        let near = pts.iter().any(|q| q != p && m.distance(p, q) < *scale);
        (!near).then(|| p.clone())
    })
}

/// Maps the first `n_points` ids of `m` order-preservingly into ℚ: scheme
/// images are translated off the endpoint set, then placed by first-fit
/// against the canonical enumeration of ℚ. The census starts at
/// `max(n_points, 2^depth)` and doubles while some cell cannot split, up to
/// `budget` points.
pub fn sierpinski_map(
    mut m: MetricPresentation,
    n_points: usize,
    depth: usize,
    budget: usize,
) -> Result<SierpinskiMap, EmbedError> {
    let mut census = n_points.max(1 << depth.min(30)).max(2);
    let scheme = loop {
        let pts = m.census(census);
        let scale = select_epsilons(&mut m, census)?.scale;
        if let Some(p) = isolated_at_scale(&m, &pts, n_points, &scale) {
            return Err(EmbedError::IsolatedPointWitness(p.to_string()));
        }
        match build_scheme(&mut m, depth, census) {
            Ok(s) => break s,
            Err(EmbedError::IsolatedPointWitness(_)) if census * 2 <= budget && pts.len() == census => census *= 2,
            Err(e) => return Err(e),
        }
    };
    let n = n_points.min(scheme.points().len());
    let code_len = scheme.max_code_len();
    let all_images: Vec<CantorPoint> =
        (0..scheme.points().len()).map(|i| CantorPoint::finite(scheme.code_of(i).to_vec())).collect();
    let endpoints = SetExpr::parse("E")
        .expect("endpoint set parses")
        .enumerate()
        .expect("endpoint set is countable")
        .map(|q| decode(&q).expect("endpoints lie in the Cantor set"));
    let shift = avoid_translation(all_images.clone(), endpoints);
    let images: Vec<CantorPoint> = all_images.into_iter().take(n).collect();
    let translated: Vec<CantorPoint> = images.iter().map(|p| xor_add(p, &shift)).collect();

    let mut target = EnumOrder::rationals();
    let mut iso = PartialIso::new();
    let mut pairs = Vec::with_capacity(n);
    for (i, t) in translated.iter().enumerate() {
        let key = Quad::from(encode_prefix(&t.prefix(code_len)).lo.as_rational().expect("rational key").clone());
        let y = iso.extend_domain(&key, &mut target, budget.max(1 << 16))?;
        let y = y.as_rational().expect("ℚ enumeration is rational").clone();
        pairs.push((scheme.points()[i].clone(), y));
    }
    Ok(SierpinskiMap {
        space: m.label().to_string(),
        census,
        depth,
        code_len,
        scheme,
        images,
        shift,
        translated,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::translation_certificate;

    #[test]
    fn rationals_map_in_order() {
        let out = sierpinski_map(MetricPresentation::q01(), 20, 6, 1 << 14).unwrap();
        assert_eq!(out.pairs.len(), 20);
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(out.lex_cmp(i, j), out.pairs[i].1.cmp(&out.pairs[j].1));
            }
        }
    }

    #[test]
    fn translated_images_avoid_endpoints() {
        let out = sierpinski_map(MetricPresentation::endpoints(), 10, 5, 1 << 14).unwrap();
        let e: Vec<CantorPoint> = SetExpr::parse("E").unwrap().enumerate().unwrap().take(10).map(|q| decode(&q).unwrap()).collect();
        for (i, a) in out.images.iter().enumerate() {
            for (j, b) in e.iter().enumerate() {
                assert!(translation_certificate(a, b, &out.shift, i, j).is_some());
            }
        }
    }

    #[test]
    fn integers_are_rejected() {
        assert!(matches!(
            sierpinski_map(MetricPresentation::integers(), 10, 4, 1 << 12),
            Err(EmbedError::IsolatedPointWitness(_))
        ));
    }
}
