//! Embedding countable metric spaces into `2^ℕ` by clopen ball schemes, and
//! the pipeline from such a space onto a suborder of ℚ.

mod metric;
mod pipeline;
mod scheme;

pub use metric::{select_epsilons, EpsilonSchedule, MetricPresentation, Point};
pub use pipeline::{sierpinski_map, SierpinskiMap};
pub use scheme::{build_scheme, complete_code, embed_eval, CantorScheme, Cell};

use crate::backforth::BackForthError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("metric violates {law} at points {points:?}")]
    InvalidMetric { law: &'static str, points: Vec<String> },
    #[error("all sampled distances between distinct points are zero")]
    DegenerateMetric,
    #[error("point {0} is isolated at the scales tried (its cell cannot split)")]
    IsolatedPointWitness(String),
    #[error("point {0} is not in the scheme's census")]
    UnknownPoint(String),
    #[error("bad metric file: {0}")]
    BadInput(String),
    #[error(transparent)]
    BackForth(#[from] BackForthError),
}
