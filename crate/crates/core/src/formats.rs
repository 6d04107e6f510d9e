//! Plain-text file formats.
//!
//! Graph files hold one record per line, vertices before the edges that use
//! them:
//!
//! ```text
//! # unit path on three vertices
//! v a 1
//! v b 1
//! v c 1
//! e a b 1
//! e b c 1
//! ```
//!
//! Parabolic step function files give the horizon, the piece count and then a
//! `piece` line of half-open intervals followed by a `values` line per piece,
//! values listed in the graph's vertex declaration order. An optional
//! `domain lo hi` line (after `tau`) marks a covered region smaller than
//! `[0, τ)`, as produced by time shifts.
//!
//! ```text
//! tau 1
//! pieces 2
//! piece [0,0.5)
//! values 0 1 2
//! piece [0.5,1)
//! values 0 0 0
//! ```
//!
//! Vertex function files hold `<id> <value>` lines; curve files hold one
//! curve per line as whitespace-separated vertex ids. Everywhere `#` starts a
//! comment and blank lines are ignored. Numbers are written in Rust's
//! shortest round-trip form, so every written file parses back to an equal
//! object.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Curve, CurveFamily, GraphSpec, MetricGraph, VertexFunction};
use crate::interval::IntervalUnion;
use crate::parabolic::{ParabolicStepFunction, TimePartition};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn number(token: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let token = token.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    token
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("{what} {token:?} is not a number")))
}

fn no_more<'a>(mut tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match tokens.next() {
        Some(extra) => Err(parse_error(line, format!("unexpected token {extra:?}"))),
        None => Ok(()),
    }
}

/// Reattaches the line number to validation failures raised past parsing.
fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_error(line, other.to_string()),
    })
}

pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    let mut spec = GraphSpec::default();
    let mut ids: Vec<String> = Vec::new();
    let mut last = 0;
    for (n, line) in records(text) {
        last = n;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let id = tokens
                    .next()
                    .ok_or_else(|| parse_error(n, "missing vertex id"))?;
                let mass = number(tokens.next(), n, "mass")?;
                no_more(tokens, n)?;
                if ids.iter().any(|x| x == id) {
                    return Err(parse_error(n, format!("duplicate vertex {id:?}")));
                }
                if !(mass.is_finite() && mass > 0.0) {
                    return Err(parse_error(n, format!("mass of {id:?} must be positive, got {mass}")));
                }
                ids.push(id.to_string());
                spec = spec.vertex(id, mass);
            }
            Some("e") => {
                let a = tokens.next().ok_or_else(|| parse_error(n, "missing edge endpoint"))?;
                let b = tokens.next().ok_or_else(|| parse_error(n, "missing edge endpoint"))?;
                let len = number(tokens.next(), n, "length")?;
                no_more(tokens, n)?;
                for id in [a, b] {
                    if !ids.iter().any(|x| x == id) {
                        return Err(parse_error(n, format!("edge uses undeclared vertex {id:?}")));
                    }
                }
                if a == b {
                    return Err(parse_error(n, format!("self-loop at {a:?}")));
                }
                if !(len.is_finite() && len > 0.0) {
                    return Err(parse_error(n, format!("edge length must be positive, got {len}")));
                }
                spec = spec.edge(a, b, len);
            }
            Some(other) => {
                return Err(parse_error(
                    n,
                    format!("unknown record {other:?}, expected \"v\" or \"e\""),
                ))
            }
            None => unreachable!(),
        }
    }
    at_line(last, MetricGraph::build(&spec))
}

pub fn write_graph(graph: &MetricGraph) -> String {
    let mut out = String::new();
    for (id, m) in graph.ids().iter().zip(graph.masses()) {
        writeln!(out, "v {id} {m}").unwrap();
    }
    for e in graph.edges() {
        writeln!(out, "e {} {} {}", graph.ids()[e.a], graph.ids()[e.b], e.length).unwrap();
    }
    out
}

/// `[a,b) [c,d) ...`; whitespace inside brackets is allowed.
pub fn parse_intervals(text: &str, line: usize) -> Result<IntervalUnion> {
    let mut parts = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| parse_error(line, format!("expected '[' at {rest:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| parse_error(line, "interval is missing its closing ')'"))?;
        let (inner, tail) = body.split_at(close);
        let mut ends = inner.split(',');
        let a = number(ends.next().map(str::trim), line, "interval start")?;
        let b = number(ends.next().map(str::trim), line, "interval end")?;
        if ends.next().is_some() {
            return Err(parse_error(line, format!("interval [{inner}) has too many endpoints")));
        }
        parts.push((a, b));
        rest = tail[1..].trim_start();
    }
    if parts.is_empty() {
        return Err(parse_error(line, "piece has no intervals"));
    }
    at_line(line, IntervalUnion::new(parts))
}

pub fn parse_parabolic(text: &str, graph: Arc<MetricGraph>) -> Result<ParabolicStepFunction> {
    let mut lines = records(text).peekable();
    fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<(usize, f64)> {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_error(0, format!("missing {key:?} line")))?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(key) {
            return Err(parse_error(n, format!("expected {key:?} line")));
        }
        let v = number(tokens.next(), n, key)?;
        no_more(tokens, n)?;
        Ok((n, v))
    }
    let (_, tau) = header(&mut lines, "tau")?;
    let mut domain = (0.0, tau);
    if let Some((n, line)) = lines.peek().copied() {
        if line.starts_with("domain") {
            lines.next();
            let mut tokens = line.split_whitespace().skip(1);
            domain = (number(tokens.next(), n, "domain start")?, number(tokens.next(), n, "domain end")?);
            no_more(tokens, n)?;
        }
    }
    let (count_line, count) = header(&mut lines, "pieces")?;
    if !(count >= 1.0 && count.fract() == 0.0) {
        return Err(parse_error(count_line, format!("piece count must be a positive integer, got {count}")));
    }
    let count = count as usize;

    let mut pieces = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    let mut last = count_line;
    for k in 0..count {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_error(last, format!("expected {count} pieces, found {k}")))?;
        let intervals = line
            .strip_prefix("piece")
            .ok_or_else(|| parse_error(n, "expected \"piece\" line"))?;
        pieces.push(parse_intervals(intervals, n)?);
        let (m, line) = lines
            .next()
            .ok_or_else(|| parse_error(n, "piece is missing its \"values\" line"))?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("values") {
            return Err(parse_error(m, "expected \"values\" line"));
        }
        let row = tokens
            .map(|t| number(Some(t), m, "vertex value"))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != graph.len() {
            return Err(parse_error(
                m,
                format!("expected {} values, found {}", graph.len(), row.len()),
            ));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(parse_error(m, format!("vertex value {bad} is not finite")));
        }
        values.push(VertexFunction::new(row));
        last = m;
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_error(n, "unexpected content after the last piece"));
    }
    let partition = at_line(count_line, TimePartition::with_domain(tau, domain, pieces))?;
    at_line(count_line, ParabolicStepFunction::new(graph, partition, values))
}

pub fn write_parabolic(f: &ParabolicStepFunction) -> String {
    let mut out = String::new();
    writeln!(out, "tau {}", f.horizon()).unwrap();
    let (lo, hi) = f.domain();
    if (lo, hi) != (0.0, f.horizon()) {
        writeln!(out, "domain {lo} {hi}").unwrap();
    }
    writeln!(out, "pieces {}", f.values().len()).unwrap();
    for (e, v) in f.pieces() {
        writeln!(out, "piece {e}").unwrap();
        write!(out, "values").unwrap();
        for x in v.iter() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_vertex_function(text: &str, graph: &MetricGraph) -> Result<VertexFunction> {
    let mut values = vec![None; graph.len()];
    for (n, line) in records(text) {
        let mut tokens = line.split_whitespace();
        let id = tokens.next().unwrap_or_default();
        let x = graph
            .index_of(id)
            .ok_or_else(|| parse_error(n, format!("unknown vertex {id:?}")))?;
        let v = number(tokens.next(), n, "value")?;
        no_more(tokens, n)?;
        if values[x].replace(v).is_some() {
            return Err(parse_error(n, format!("vertex {id:?} given twice")));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(x, v)| {
            v.ok_or_else(|| parse_error(0, format!("no value for vertex {:?}", graph.ids()[x])))
        })
        .collect::<Result<Vec<_>>>()
        .map(VertexFunction::new)
}

pub fn write_vertex_function(graph: &MetricGraph, u: &VertexFunction) -> String {
    let mut out = String::new();
    for (id, v) in graph.ids().iter().zip(u.iter()) {
        writeln!(out, "{id} {v}").unwrap();
    }
    out
}

pub fn parse_curves(text: &str, graph: &MetricGraph) -> Result<CurveFamily> {
    let mut family = CurveFamily::empty();
    for (n, line) in records(text) {
        let ids: Vec<&str> = line.split_whitespace().collect();
        let curve = at_line(n, Curve::from_ids(graph, &ids))?;
        at_line(n, family.push(curve))?;
    }
    Ok(family)
}

pub fn write_curves(graph: &MetricGraph, family: &CurveFamily) -> String {
    let mut out = String::new();
    for c in family.iter() {
        let ids: Vec<&str> = c.vertices().iter().map(|&x| graph.ids()[x].as_str()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

/// Whether a text holds a parabolic step function rather than a vertex function.
pub fn looks_parabolic(text: &str) -> bool {
    records(text)
        .next()
        .is_some_and(|(_, line)| line.split_whitespace().next() == Some("tau"))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn read_graph(path: &Path) -> Result<MetricGraph> {
    parse_graph(&read_to_string(path)?)
}

pub fn read_parabolic(path: &Path, graph: Arc<MetricGraph>) -> Result<ParabolicStepFunction> {
    parse_parabolic(&read_to_string(path)?, graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P3: &str = "# path\nv a 1\nv b 1\nv c 1\n\ne a b 1\ne b c 1   # last edge\n";

    #[test]
    fn graph_round_trip() {
        let g = parse_graph(P3).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let odd = MetricGraph::build(
            &GraphSpec::default()
                .vertex("x", 0.1)
                .vertex("y", 1e-20)
                .edge("x", "y", 1.0 / 3.0),
        )
        .unwrap();
        assert_eq!(parse_graph(&write_graph(&odd)).unwrap(), odd);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let cases = [
            ("v a 1\nv a 2\n", 2),
            ("v a 1\ne a b 1\n", 2),
            ("v a x\n", 1),
            ("\n\nq a\n", 3),
            ("v a 1\nv b 1\ne a b -1\n", 3),
            ("v a 1\nv b 1\ne a b 1 7\n", 3),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        // Disconnected: reported against the last record.
        assert!(matches!(
            parse_graph("v a 1\nv b 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parabolic_round_trip() {
        let g = Arc::new(parse_graph(P3).unwrap());
        let text = "tau 1\npieces 2\npiece [0, 0.25) [0.5,1)\nvalues 0 1 2\npiece [0.25,0.5)\nvalues 3 -1 0.5\n";
        let f = parse_parabolic(text, g.clone()).unwrap();
        assert_eq!(f.values().len(), 2);
        assert_eq!(f.evaluate(0.75).unwrap().values(), &[0.0, 1.0, 2.0]);
        let written = write_parabolic(&f);
        assert_eq!(parse_parabolic(&written, g.clone()).unwrap(), f);

        let shifted = f.time_shift(0.1).unwrap();
        let written = write_parabolic(&shifted);
        assert!(written.contains("domain 0.1 1"));
        assert_eq!(parse_parabolic(&written, g).unwrap(), shifted);
    }

    #[test]
    fn parabolic_errors() {
        let g = Arc::new(parse_graph(P3).unwrap());
        let cases = [
            ("tau 1\npieces 1\npiece [0,1)\nvalues 0 1\n", 4),
            ("tau 1\npieces 2\npiece [0,0.5)\nvalues 0 1 2\npiece [0.6,1)\nvalues 0 0 0\n", 2),
            ("tau 1\npieces 1\npiece [0,1\nvalues 0 1 2\n", 3),
            ("tau 1\npieces 1\nvalues 0 1 2\n", 3),
            ("pieces 1\n", 1),
            ("tau 1\npieces 1\npiece [0,1)\nvalues 0 1 2\nextra\n", 5),
        ];
        for (text, line) in cases {
            match parse_parabolic(text, g.clone()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn vertex_functions_and_curves() {
        let g = parse_graph(P3).unwrap();
        let u = parse_vertex_function("c 2\na 0.5\nb -1\n", &g).unwrap();
        assert_eq!(u.values(), &[0.5, -1.0, 2.0]);
        assert_eq!(parse_vertex_function(&write_vertex_function(&g, &u), &g).unwrap(), u);
        assert!(parse_vertex_function("a 1\n", &g).is_err());

        let fam = parse_curves("a b c\nb c\n", &g).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(parse_curves(&write_curves(&g, &fam), &g).unwrap(), fam);
        assert!(matches!(parse_curves("a c\n", &g), Err(Error::Parse { line: 1, .. })));
        assert!(looks_parabolic("# x\ntau 2\n"));
        assert!(!looks_parabolic("a 1\n"));
    }
}
