use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::EmbedError;
use crate::cantor::diagonal_pair;
use crate::exactnum::{parse_rational, Quad, Rational};
use crate::setdsl::SetExpr;

/// Opaque point identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Scalar(Rational),
    Pair(Rational, Rational),
    Integer(BigInt),
    Label(String),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Scalar(r) => write!(f, "{r}"),
            Point::Pair(a, b) => write!(f, "({a},{b})"),
            Point::Integer(n) => write!(f, "{n}"),
            Point::Label(s) => f.write_str(s),
        }
    }
}

type Metric = Arc<dyn Fn(&Point, &Point) -> Rational + Send + Sync>;

/// A countable metric space given by an enumeration of its points and a
/// rational-valued distance oracle.
pub struct MetricPresentation {
    label: String,
    source: Box<dyn Iterator<Item = Point> + Send>,
    cache: Vec<Point>,
    exhausted: bool,
    metric: Metric,
}

impl fmt::Debug for MetricPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricPresentation")
            .field("label", &self.label)
            .field("cached", &self.cache.len())
            .finish()
    }
}

fn abs_diff(p: &Point, q: &Point) -> Rational {
    match (p, q) {
        (Point::Scalar(a), Point::Scalar(b)) => (a - b).abs(),
        (Point::Integer(a), Point::Integer(b)) => Rational::from_integer((a - b).abs()),
        _ => panic!("scalar metric applied to {p} and {q}"),
    }
}

fn max_metric(p: &Point, q: &Point) -> Rational {
    match (p, q) {
        (Point::Pair(a1, b1), Point::Pair(a2, b2)) => (a1 - a2).abs().max((b1 - b2).abs()),
        _ => panic!("product metric applied to {p} and {q}"),
    }
}

impl MetricPresentation {
    pub fn new(
        label: impl Into<String>,
        points: impl Iterator<Item = Point> + Send + 'static,
        metric: impl Fn(&Point, &Point) -> Rational + Send + Sync + 'static,
    ) -> Self {
        MetricPresentation {
            label: label.into(),
            source: Box::new(points),
            cache: Vec::new(),
            exhausted: false,
            metric: Arc::new(metric),
        }
    }

    fn from_set(label: &str, set: &str) -> Self {
        let e = SetExpr::parse(set).expect("built-in set parses");
        let points = e.enumerate().expect("built-in set is countable").map(Point::Scalar);
        Self::new(label, points, abs_diff)
    }

    /// ℚ ∩ (0,1) with the usual distance.
    pub fn q01() -> Self {
        Self::from_set("Q01", "(0,1)&Q")
    }

    /// Endpoints of the middle-thirds construction, usual distance.
    pub fn endpoints() -> Self {
        Self::from_set("E", "E")
    }

    /// `(ℚ ∩ (0,1))²` with the max metric, enumerated along diagonals.
    pub fn q01_squared() -> Self {
        let mut base: Vec<Rational> = Vec::new();
        let mut base_iter = SetExpr::parse("(0,1)&Q")
            .expect("built-in set parses")
            .enumerate()
            .expect("countable");
        let points = (0usize..).map(move |k| {
            let (i, j) = diagonal_pair(k);
            while base.len() <= i.max(j) {
                base.push(base_iter.next().expect("infinite enumeration"));
            }
            Point::Pair(base[i].clone(), base[j].clone())
        });
        Self::new("QxQ", points, max_metric)
    }

    /// The integers; every point is isolated.
    pub fn integers() -> Self {
        let points = std::iter::once(BigInt::zero())
            .chain((1u64..).flat_map(|k| [BigInt::from(k), -BigInt::from(k)]))
            .map(Point::Integer);
        Self::new("Z", points, abs_diff)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "Q01" => Some(Self::q01()),
            "E" => Some(Self::endpoints()),
            "QxQ" => Some(Self::q01_squared()),
            "Z" => Some(Self::integers()),
            _ => None,
        }
    }

    /// A finite space from `{"points": [labels], "metric": [[rationals]]}`.
    pub fn from_json(text: &str) -> Result<Self, EmbedError> {
        #[derive(serde::Deserialize)]
        struct Raw {
            points: Vec<serde_json::Value>,
            metric: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| EmbedError::BadInput(e.to_string()))?;
        let n = raw.points.len();
        if raw.metric.len() != n || raw.metric.iter().any(|row| row.len() != n) {
            return Err(EmbedError::BadInput(format!("metric must be a {n}x{n} matrix")));
        }
        let labels: Vec<String> = raw
            .points
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        let mut table = Vec::with_capacity(n);
        for row in &raw.metric {
            let parsed: Result<Vec<Rational>, _> = row.iter().map(|s| parse_rational(s)).collect();
            table.push(parsed.map_err(|e| EmbedError::BadInput(e.to_string()))?);
        }
        let index: std::collections::HashMap<String, usize> =
            labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        if index.len() != n {
            return Err(EmbedError::BadInput("point labels must be distinct".into()));
        }
        let metric = move |p: &Point, q: &Point| {
            let (Point::Label(a), Point::Label(b)) = (p, q) else {
                panic!("labelled metric applied to {p} and {q}");
            };
            table[index[a]][index[b]].clone()
        };
        let pts: Vec<Point> = labels.into_iter().map(Point::Label).collect();
        let m = Self::new("custom", pts.into_iter(), metric);
        Ok(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn point(&mut self, i: usize) -> Option<&Point> {
        while self.cache.len() <= i && !self.exhausted {
            match self.source.next() {
                Some(p) => self.cache.push(p),
                None => self.exhausted = true,
            }
        }
        self.cache.get(i)
    }

    /// The first `n` points (fewer if the space is finite).
    pub fn census(&mut self, n: usize) -> Vec<Point> {
        if n > 0 {
            self.point(n - 1);
        }
        self.cache[..n.min(self.cache.len())].to_vec()
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Rational {
        (self.metric)(p, q)
    }

    /// Checks the metric axioms on all pairs and triples of the first `k`
    /// points.
    pub fn validate(&mut self, k: usize) -> Result<(), EmbedError> {
        let pts = self.census(k);
        let bad = |law, ps: &[&Point]| EmbedError::InvalidMetric {
            law,
            points: ps.iter().map(|p| p.to_string()).collect(),
        };
        for (i, p) in pts.iter().enumerate() {
            for (j, q) in pts.iter().enumerate() {
                let d = self.distance(p, q);
                if d.is_negative() {
                    return Err(bad("non-negativity", &[p, q]));
                }
                if (i == j) != d.is_zero() {
                    return Err(bad("zero exactly on the diagonal", &[p, q]));
                }
                if d != self.distance(q, p) {
                    return Err(bad("symmetry", &[p, q]));
                }
                for r in &pts {
                    if self.distance(p, r) > &d + self.distance(q, r) {
                        return Err(bad("triangle inequality", &[p, q, r]));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `ε_n = s·√2 / 2^n` for `n ≥ 1`. Irrational, so never a distance of a
/// rational-valued metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSchedule {
    pub scale: Rational,
}

impl EpsilonSchedule {
    pub fn eps(&self, n: usize) -> Quad {
        let two_n = Rational::from_integer(BigInt::one() << n);
        Quad::sqrt2_times(&self.scale / two_n)
    }

    pub fn values(&self, count: usize) -> Vec<Quad> {
        (1..=count).map(|n| self.eps(n)).collect()
    }
}

/// The scale is the first positive distance from the first point, so that
/// `ε_1 = s/√2 < s`.
pub fn select_epsilons(m: &mut MetricPresentation, sample: usize) -> Result<EpsilonSchedule, EmbedError> {
    let pts = m.census(sample.max(2));
    let first = pts.first().ok_or(EmbedError::DegenerateMetric)?;
    pts.iter()
        .skip(1)
        .map(|q| m.distance(first, q))
        .find(|d| d.is_positive())
        .map(|scale| EpsilonSchedule { scale })
        .ok_or(EmbedError::DegenerateMetric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn two_points() -> MetricPresentation {
        let pts = vec![Point::Label("a".into()), Point::Label("b".into())];
        MetricPresentation::new("pair", pts.into_iter(), |p, q| {
            if p == q {
                rat(0, 1)
            } else {
                rat(1, 1)
            }
        })
    }

    #[test]
    fn unit_pair_schedule() {
        let s = select_epsilons(&mut two_points(), 2).unwrap();
        assert_eq!(s.eps(1), Quad::sqrt2_times(rat(1, 2)));
        assert!(s.eps(1) < Quad::from(rat(1, 1)));
        let v = s.values(101);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn epsilons_avoid_distances() {
        let mut m = MetricPresentation::q01();
        let s = select_epsilons(&mut m, 10).unwrap();
        let pts = m.census(30);
        for n in 1..20 {
            let e = s.eps(n);
            for p in &pts {
                for q in &pts {
                    assert_ne!(Quad::from(m.distance(p, q)), e);
                }
            }
        }
    }

    #[test]
    fn builtins_are_metrics() {
        for name in ["Q01", "E", "QxQ", "Z"] {
            MetricPresentation::builtin(name).unwrap().validate(12).unwrap();
        }
    }

    #[test]
    fn json_space() {
        let m = MetricPresentation::from_json(r#"{"points":["x","y"],"metric":[["0","1/2"],["1/2","0"]]}"#);
        let mut m = m.unwrap();
        m.validate(2).unwrap();
        let bad = MetricPresentation::from_json(r#"{"points":["x","y"],"metric":[["0","1"],["2","0"]]}"#);
        assert!(matches!(bad.unwrap().validate(2), Err(EmbedError::InvalidMetric { law: "symmetry", .. })));
    }

    #[test]
    fn single_point_is_degenerate() {
        let mut m = MetricPresentation::new("pt", std::iter::once(Point::Label("p".into())), |_, _| rat(0, 1));
        assert_eq!(select_epsilons(&mut m, 4), Err(EmbedError::DegenerateMetric));
    }
}
