//! Verb-style command line over the library. Exit status 0 on success, 2 on
//! usage errors (including malformed set expressions, numbers and bit
//! patterns), 1 on domain errors.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::cantor::{avoid_translation_finite, decode, encode, translation_certificate, CantorPoint};
use crate::dedekind::{brouwer_map, Bracket};
use crate::embed::{sierpinski_map, MetricPresentation};
use crate::exactnum::{parse_rational, ratio_to_decimal, BitStream, Quad, Rational};
use crate::gaps::{characterize, classify_gaps, GapKind, Tri};
use crate::setdsl::SetExpr;

#[derive(Debug, Parser)]
#[command(name = "ordtopo", version, about = "Order topology on subsets of the real line")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also render numbers as decimals truncated to K places.
    #[arg(long, global = true, value_name = "K")]
    approx: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the gaps of a set: essential, Dedekind and pseudo.
    Classify { set: String },
    /// Decide the order type and topological type of a set.
    Characterize { set: String },
    /// Evaluate the order isomorphism between two Cantor-like sets.
    MapBrouwer {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Points to evaluate (`p/q` or `p/q + r/s*sqrt2`); repeatable.
        #[arg(long, required = true)]
        query: Vec<String>,
        #[arg(long, default_value = "1/1000000")]
        eps: String,
        #[arg(long, default_value_t = 1 << 20)]
        budget: usize,
    },
    /// Map a countable metric space without isolated points into ℚ.
    MapSierpinski {
        /// Built-in space: Q01, E, QxQ or Z.
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        space: Option<String>,
        /// Finite space as `{"points": [...], "metric": [[...]]}`.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1 << 16)]
        budget: usize,
    },
    /// Value of a bit pattern `pre(period)` in the middle-thirds set.
    CantorEncode {
        pattern: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Bit stream of a rational in the middle-thirds set.
    CantorDecode {
        value: String,
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// A shift `x` with `(A ⊕ x) ∩ B = ∅` for finite lists of patterns.
    CantorTranslate {
        /// Patterns of A; repeatable.
        #[arg(long = "a", required = true)]
        a: Vec<String>,
        /// Patterns of B; repeatable.
        #[arg(long = "b", required = true)]
        b: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// Parses a bit pattern: `0110` (then zeros), `(01)` or `1(10)`.
pub fn parse_pattern(s: &str) -> Result<BitStream, String> {
    let bits = |t: &str| -> Result<Vec<bool>, String> {
        t.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(format!("bad bit `{c}` in pattern `{s}`")),
            })
            .collect()
    };
    match s.find('(') {
        None => Ok(BitStream::finite(bits(s)?)),
        Some(open) => {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| format!("pattern `{s}` must end with `)`"))?;
            let period = bits(inner)?;
            if period.is_empty() {
                return Err(format!("empty period in pattern `{s}`"));
            }
            Ok(BitStream::periodic(bits(&s[..open])?, period))
        }
    }
}

/// Inverse of [`parse_pattern`] on symbolic streams.
fn show_pattern(p: &BitStream) -> Option<String> {
    let word = |w: &[bool]| w.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
    p.symbolic().map(|(pre, period)| format!("{}({})", word(pre), word(period)))
}

struct Printer {
    approx: Option<usize>,
}

impl Printer {
    fn rat(&self, r: &Rational) -> String {
        match self.approx {
            Some(k) => format!("{r} ≈ {}", ratio_to_decimal(r, k)),
            None => r.to_string(),
        }
    }

    fn rat_json(&self, r: &Rational) -> Value {
        match self.approx {
            Some(k) => json!({"exact": r.to_string(), "approx": ratio_to_decimal(r, k)}),
            None => json!(r.to_string()),
        }
    }

    fn quad(&self, q: &Quad) -> String {
        match (q.as_rational(), self.approx) {
            (Some(r), _) => self.rat(r),
            (None, Some(k)) => {
                let (lo, _) = q.rational_bracket(4 * k as u32 + 8);
                format!("{q} ≈ {}", ratio_to_decimal(&lo, k))
            }
            (None, None) => q.to_string(),
        }
    }

    fn bracket(&self, b: &Bracket) -> String {
        if b.is_degenerate() {
            self.quad(&b.lo)
        } else {
            format!("[{}, {}]", self.quad(&b.lo), self.quad(&b.hi))
        }
    }
}

fn kind_name(k: GapKind) -> &'static str {
    match k {
        GapKind::Essential => "essential",
        GapKind::Dedekind => "dedekind",
        GapKind::Pseudo => "pseudo",
    }
}

fn parse_set(s: &str) -> Result<SetExpr, Failure> {
    SetExpr::parse(s).map_err(usage)
}

fn classify(set: &str, json_out: bool) -> Result<String, Failure> {
    let e = parse_set(set)?;
    let r = classify_gaps(&e);
    let fam = |k| r.families.iter().filter(|f| f.kind == k).count();
    let summary = format!(
        "{} essential, {} pseudo, {} explicit dedekind, {} dedekind famil{}, {} essential famil{}",
        r.count(GapKind::Essential),
        r.count(GapKind::Pseudo),
        r.count(GapKind::Dedekind),
        fam(GapKind::Dedekind),
        if fam(GapKind::Dedekind) == 1 { "y" } else { "ies" },
        fam(GapKind::Essential),
        if fam(GapKind::Essential) == 1 { "y" } else { "ies" },
    );
    if json_out {
        let v = json!({"set": e.to_string(), "report": r, "summary": summary});
        return Ok(v.to_string());
    }
    let mut s = format!("set: {e}\n");
    if !r.explicit.is_empty() {
        s.push_str("gaps:\n");
        for g in &r.explicit {
            s.push_str(&format!("  {g}  {}\n", kind_name(g.kind)));
        }
    }
    if !r.families.is_empty() {
        s.push_str("families:\n");
        for f in &r.families {
            s.push_str(&format!(
                "  {}  {}, {}: {}\n",
                f.block,
                kind_name(f.kind),
                f.cardinality,
                f.description
            ));
        }
    }
    if !r.rays.is_empty() {
        s.push_str("rays:\n");
        for ray in &r.rays {
            s.push_str(&format!("  {ray}\n"));
        }
    }
    s.push_str(&format!("summary: {summary}"));
    Ok(s)
}

fn characterize_cmd(set: &str, json_out: bool) -> Result<String, Failure> {
    let e = parse_set(set)?;
    let v = characterize(&e);
    if json_out {
        return Ok(json!({"set": e.to_string(), "verdict": v}).to_string());
    }
    let tri = |t: Tri| match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    };
    let p = &v.properties;
    let mut s = format!("set: {e}\nverdict: {}\n", v.kind);
    for line in &v.justification {
        s.push_str(&format!("  because {line}\n"));
    }
    for (name, c) in [
        ("countable", &p.countable),
        ("compact", &p.compact),
        ("perfect", &p.perfect),
        ("nowhere_dense", &p.nowhere_dense),
        ("has_isolated_points", &p.has_isolated_points),
        ("all_points_two_sided_limits", &p.all_points_two_sided_limits),
    ] {
        s.push_str(&format!("{name}: {}\n", tri(c.answer)));
    }
    Ok(s.trim_end().to_string())
}

fn map_brouwer(
    from: &str,
    to: &str,
    queries: &[String],
    eps: &str,
    budget: usize,
    json_out: bool,
    pr: &Printer,
) -> Result<String, Failure> {
    let x = parse_set(from)?;
    let y = parse_set(to)?;
    let eps: Quad = eps.parse().map_err(usage)?;
    if !eps.is_positive() {
        return Err(usage("--eps must be positive"));
    }
    let qs = queries
        .iter()
        .map(|q| q.parse::<Quad>().map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = brouwer_map(&x, &y).map_err(domain)?;
    let mut rows = Vec::new();
    let mut text = format!("map: {x} -> {y}\n");
    for q in &qs {
        let b = m.extend_eval(q, &eps, budget).map_err(domain)?;
        text.push_str(&format!("{} -> {}\n", pr.quad(q), pr.bracket(&b)));
        rows.push(json!({
            "query": q.to_string(),
            "lo": b.lo.to_string(),
            "hi": b.hi.to_string(),
            "exact": b.is_degenerate(),
        }));
    }
    if json_out {
        return Ok(json!({"from": x.to_string(), "to": y.to_string(), "eps": eps.to_string(), "results": rows}).to_string());
    }
    Ok(text.trim_end().to_string())
}

fn bits(w: &[bool]) -> String {
    w.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn map_sierpinski(
    space: Option<&str>,
    file: Option<&PathBuf>,
    points: usize,
    depth: usize,
    budget: usize,
    json_out: bool,
    pr: &Printer,
) -> Result<String, Failure> {
    if depth > 24 {
        return Err(usage("--depth is limited to 24"));
    }
    let m = match (space, file) {
        (Some(name), _) => MetricPresentation::builtin(name)
            .ok_or_else(|| usage(format!("unknown space `{name}` (expected Q01, E, QxQ or Z)")))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            MetricPresentation::from_json(&text).map_err(usage)?
        }
        (None, None) => return Err(usage("a space name or --file is required")),
    };
    let out = sierpinski_map(m, points, depth, budget).map_err(domain)?;
    let shift_len = out.code_len;
    if json_out {
        let rows: Vec<Value> = out
            .pairs
            .iter()
            .zip(&out.translated)
            .map(|((p, v), t)| json!({"id": p.to_string(), "value": pr.rat_json(v), "image": bits(&t.prefix(out.code_len))}))
            .collect();
        return Ok(json!({
            "space": out.space,
            "census": out.census,
            "depth": out.depth,
            "code_len": out.code_len,
            "shift_prefix": bits(&out.shift.prefix(shift_len)),
            "points": rows,
        })
        .to_string());
    }
    let mut s = format!(
        "space: {}  census: {}  depth: {}  code length: {}\nshift: {}…\n",
        out.space,
        out.census,
        out.depth,
        out.code_len,
        bits(&out.shift.prefix(shift_len))
    );
    for ((p, v), t) in out.pairs.iter().zip(&out.translated) {
        s.push_str(&format!("{p}  {}  {}\n", bits(&t.prefix(out.code_len)), pr.rat(v)));
    }
    Ok(s.trim_end().to_string())
}

fn cantor_encode(pattern: &str, depth: usize, json_out: bool, pr: &Printer) -> Result<String, Failure> {
    let p = parse_pattern(pattern).map_err(usage)?;
    let b = encode(&p, depth);
    if json_out {
        return Ok(json!({"pattern": pattern, "lo": b.lo.to_string(), "hi": b.hi.to_string(), "exact": b.is_degenerate()}).to_string());
    }
    Ok(format!("{pattern} -> {}", pr.bracket(&b)))
}

fn cantor_decode(value: &str, depth: usize, json_out: bool) -> Result<String, Failure> {
    let q = parse_rational(value).map_err(usage)?;
    let p = decode(&q).map_err(domain)?;
    let pattern = show_pattern(&p);
    if json_out {
        return Ok(json!({"value": q.to_string(), "pattern": pattern, "prefix": bits(&p.prefix(depth))}).to_string());
    }
    Ok(format!("{q} -> {}  ({})", pattern.unwrap_or_default(), p.render(depth)))
}

fn cantor_translate(a: &[String], b: &[String], json_out: bool) -> Result<String, Failure> {
    let parse = |v: &[String]| v.iter().map(|s| parse_pattern(s).map_err(usage)).collect::<Result<Vec<CantorPoint>, _>>();
    let (a, b) = (parse(a)?, parse(b)?);
    let x = avoid_translation_finite(&a, &b);
    let mut certificates = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let k = translation_certificate(ai, bj, &x, i, j).ok_or_else(|| domain(format!("pair ({i}, {j}) not separated")))?;
            certificates.push((i, j, k));
        }
    }
    let word = show_pattern(&x).unwrap_or_default();
    if json_out {
        let rows: Vec<Value> = certificates.iter().map(|(i, j, k)| json!({"a": i, "b": j, "bit": k})).collect();
        return Ok(json!({"shift": word, "certificates": rows}).to_string());
    }
    let mut s = format!("shift: {word}\n");
    for (i, j, k) in certificates {
        s.push_str(&format!("a[{i}] + x differs from b[{j}] at bit {k}\n"));
    }
    Ok(s.trim_end().to_string())
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let pr = Printer { approx: cli.approx };
    let j = cli.json;
    match &cli.command {
        Command::Classify { set } => classify(set, j),
        Command::Characterize { set } => characterize_cmd(set, j),
        Command::MapBrouwer { from, to, query, eps, budget } => map_brouwer(from, to, query, eps, *budget, j, &pr),
        Command::MapSierpinski { space, file, points, depth, budget } => {
            map_sierpinski(space.as_deref(), file.as_ref(), *points, *depth, *budget, j, &pr)
        }
        Command::CantorEncode { pattern, depth } => cantor_encode(pattern, *depth, j, &pr),
        Command::CantorDecode { value, depth } => cantor_decode(value, *depth, j),
        Command::CantorTranslate { a, b } => cantor_translate(a, b, j),
    }
}

/// Runs one command; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = writeln!(out, "{report}");
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
