use std::fmt;

use serde::Serialize;

use super::properties::{check_properties, Check, PropertyReport, Tri};
use crate::setdsl::SetExpr;

/// `HomeoToC` exists for completeness but is never produced for subsets of
/// the line: a compact, perfect, totally disconnected subset of the line is
/// nowhere dense there, so it is already `OrderHomeoToC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    OrderHomeoToQ,
    OrderHomeoToC,
    HomeoToQNotOrder,
    HomeoToC,
    None,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub justification: Vec<String>,
    pub properties: PropertyReport,
}

fn cite(name: &str, c: &Check) -> String {
    let answer = match c.answer {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    };
    if c.witnesses.is_empty() {
        format!("{name}: {answer}")
    } else {
        let w: Vec<String> = c.witnesses.iter().take(3).map(|w| w.to_string()).collect();
        format!("{name}: {answer} (witness {})", w.join(", "))
    }
}

pub fn characterize(e: &SetExpr) -> Verdict {
    let p = check_properties(e);
    let nonempty = !e.is_empty();
    let cites = |names: &[(&str, &Check)]| names.iter().map(|(n, c)| cite(n, c)).collect::<Vec<_>>();

    let order_c = nonempty && p.perfect.holds() && p.nowhere_dense.holds() && p.compact.holds();
    let order_q = nonempty && p.countable.holds() && p.all_points_two_sided_limits.holds();
    let no_isolated = p.has_isolated_points.answer == Tri::No;

    let (kind, justification) = if order_c {
        (
            VerdictKind::OrderHomeoToC,
            cites(&[("perfect", &p.perfect), ("nowhere_dense", &p.nowhere_dense), ("compact", &p.compact)]),
        )
    } else if order_q {
        (
            VerdictKind::OrderHomeoToQ,
            cites(&[
                ("countable", &p.countable),
                ("all_points_two_sided_limits", &p.all_points_two_sided_limits),
            ]),
        )
    } else if nonempty && p.countable.holds() && no_isolated {
        (
            VerdictKind::HomeoToQNotOrder,
            cites(&[
                ("countable", &p.countable),
                ("has_isolated_points", &p.has_isolated_points),
                ("all_points_two_sided_limits", &p.all_points_two_sided_limits),
            ]),
        )
    } else {
        let mut j = if nonempty { Vec::new() } else { vec!["empty set".to_string()] };
        j.extend(cites(&[
            ("countable", &p.countable),
            ("has_isolated_points", &p.has_isolated_points),
            ("all_points_two_sided_limits", &p.all_points_two_sided_limits),
            ("perfect", &p.perfect),
            ("nowhere_dense", &p.nowhere_dense),
            ("compact", &p.compact),
        ]));
        (VerdictKind::None, j)
    };
    Verdict {
        kind,
        justification,
        properties: p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(s: &str) -> VerdictKind {
        characterize(&SetExpr::parse(s).unwrap()).kind
    }

    #[test]
    fn verdicts() {
        assert_eq!(kind("C"), VerdictKind::OrderHomeoToC);
        assert_eq!(kind("E"), VerdictKind::HomeoToQNotOrder);
        assert_eq!(kind("[0,1]&Q"), VerdictKind::HomeoToQNotOrder);
        assert_eq!(kind("(0,1)&D"), VerdictKind::OrderHomeoToQ);
        assert_eq!(kind("Q"), VerdictKind::OrderHomeoToQ);
        assert_eq!(kind("[0,1]&cantor(2/5)"), VerdictKind::OrderHomeoToC);
    }

    #[test]
    fn discrete_pair_has_no_verdict() {
        let v = characterize(&SetExpr::parse("{0} u {1}").unwrap());
        assert_eq!(v.kind, VerdictKind::None);
        assert!(v.justification.iter().any(|j| j.starts_with("has_isolated_points: yes (witness 0")));
    }
}
