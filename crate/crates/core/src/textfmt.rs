//! Line-based text format for metric marked graphs and stratum indices.
//!
//! ```text
//! # comments start with '#'
//! graph <name>
//! v <vid>
//! e <eid> <src-vid> <dst-vid> <length>
//! mark <k> v <vid>
//! mark <k> e <eid> <offset>     # metric graphs: offset from <src-vid>
//! mark <k> e <eid>              # strata: slot k is the edge itself
//! ```
//!
//! Lengths and offsets are integers or `p/q`. Edge id `k` owns the dart
//! pair `(2k, 2k+1)`, with dart `2k` based at `<src-vid>`; offsets are
//! measured from there. Marks must form a gap-free range `1..=n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::graph::{DartId, Graph, MarkId, RawGraph, VertexId};
use crate::metric::{DeltaPoint, MetricMarkedGraph};
use crate::strata::{Slot, StratumIndex};
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

/// Parses `p/q` or an integer literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Q> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

enum MarkSpec {
    AtVertex(VertexId),
    OnEdge { eid: u32, offset: Option<Q> },
}

struct Doc {
    name: String,
    vertices: Vec<VertexId>,
    edges: Vec<(u32, VertexId, VertexId, Q, usize)>,
    marks: Vec<(MarkId, MarkSpec, usize)>,
}

fn scan(text: &str) -> Result<Doc, ParseError> {
    let mut name: Option<String> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut marks = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "graph" => {
                if tokens.len() != 2 {
                    return err(line, "expected: graph <name>");
                }
                if name.is_some() {
                    return err(line, "duplicate graph header");
                }
                name = Some(tokens[1].to_string());
            }
            "v" => {
                if tokens.len() != 2 {
                    return err(line, "expected: v <vid>");
                }
                let vid: VertexId = tokens[1]
                    .parse()
                    .map_err(|_| ParseError {
                        line,
                        msg: format!("bad vertex id '{}'", tokens[1]),
                    })?;
                vertices.push(vid);
            }
            "e" => {
                if tokens.len() != 5 {
                    return err(line, "expected: e <eid> <src-vid> <dst-vid> <length>");
                }
                let eid: u32 = tokens[1]
                    .parse()
                    .map_err(|_| ParseError {
                        line,
                        msg: format!("bad edge id '{}'", tokens[1]),
                    })?;
                let a: VertexId = tokens[2]
                    .parse()
                    .map_err(|_| ParseError {
                        line,
                        msg: format!("bad vertex id '{}'", tokens[2]),
                    })?;
                let b: VertexId = tokens[3]
                    .parse()
                    .map_err(|_| ParseError {
                        line,
                        msg: format!("bad vertex id '{}'", tokens[3]),
                    })?;
                let l = parse_rational(tokens[4]).ok_or_else(|| ParseError {
                    line,
                    msg: format!("bad length '{}'", tokens[4]),
                })?;
                edges.push((eid, a, b, l, line));
            }
            "mark" => {
                if tokens.len() < 4 {
                    return err(line, "expected: mark <k> v <vid> | mark <k> e <eid> [<offset>]");
                }
                let k: MarkId = tokens[1]
                    .parse()
                    .map_err(|_| ParseError {
                        line,
                        msg: format!("bad mark index '{}'", tokens[1]),
                    })?;
                if k == 0 {
                    return err(line, "mark indices are 1-based");
                }
                let spec = match tokens[2] {
                    "v" => {
                        if tokens.len() != 4 {
                            return err(line, "expected: mark <k> v <vid>");
                        }
                        let vid: VertexId = tokens[3]
                            .parse()
                            .map_err(|_| ParseError {
                                line,
                                msg: format!("bad vertex id '{}'", tokens[3]),
                            })?;
                        MarkSpec::AtVertex(vid)
                    }
                    "e" => {
                        let eid: u32 = tokens[3]
                            .parse()
                            .map_err(|_| ParseError {
                                line,
                                msg: format!("bad edge id '{}'", tokens[3]),
                            })?;
                        let offset = match tokens.len() {
                            4 => None,
                            5 => Some(parse_rational(tokens[4]).ok_or_else(|| ParseError {
                                line,
                                msg: format!("bad offset '{}'", tokens[4]),
                            })?),
                            _ => return err(line, "expected: mark <k> e <eid> [<offset>]"),
                        };
                        MarkSpec::OnEdge { eid, offset }
                    }
                    other => return err(line, format!("expected 'v' or 'e', found '{other}'")),
                };
                marks.push((k, spec, line));
            }
            other => return err(line, format!("unknown directive '{other}'")),
        }
    }
    Ok(Doc {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        vertices,
        edges,
        marks,
    })
}

fn build_graph_part(doc: &Doc) -> Result<(Graph, BTreeMap<u32, usize>), ParseError> {
    let mut raw = RawGraph {
        vertices: doc.vertices.clone(),
        ..Default::default()
    };
    let mut edge_lines: BTreeMap<u32, usize> = BTreeMap::new();
    for &(eid, a, b, _, line) in &doc.edges {
        if edge_lines.insert(eid, line).is_some() {
            return err(line, format!("duplicate edge id {eid}"));
        }
        raw.dart_pairs.push((2 * eid, 2 * eid + 1));
        raw.sources.push((2 * eid, a));
        raw.sources.push((2 * eid + 1, b));
    }
    let graph = Graph::validate(&raw).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok((graph, edge_lines))
}

fn collect_marks<T>(
    parsed: Vec<(MarkId, T, usize)>,
) -> Result<Vec<T>, ParseError> {
    let n = parsed.len();
    let mut slots: Vec<Option<(T, usize)>> = (0..n).map(|_| None).collect();
    for (k, value, line) in parsed {
        if k as usize > n {
            return err(
                line,
                format!("mark {k} leaves a gap: marks must form 1..={n}"),
            );
        }
        if slots[(k - 1) as usize].replace((value, line)).is_some() {
            return err(line, format!("duplicate mark {k}"));
        }
    }
    Ok(slots.into_iter().map(|s| s.unwrap().0).collect())
}

/// Parses the metric form: every mark needs a vertex or an interior
/// offset.
pub fn parse_metric_graph(text: &str) -> Result<(String, MetricMarkedGraph<Q>), ParseError> {
    let doc = scan(text)?;
    let (graph, _) = build_graph_part(&doc)?;
    let mut lengths = BTreeMap::new();
    for &(eid, _, _, ref l, line) in &doc.edges {
        if !num::Signed::is_positive(l) {
            return err(line, format!("edge {eid} must have positive length"));
        }
        lengths.insert(graph.edge_of(2 * eid), l.clone());
    }
    let mut parsed_marks = Vec::new();
    for (k, spec, line) in doc.marks {
        let point = match spec {
            MarkSpec::AtVertex(v) => {
                if !graph.has_vertex(v) {
                    return err(line, format!("mark {k} on unknown vertex {v}"));
                }
                DeltaPoint::AtVertex(v)
            }
            MarkSpec::OnEdge { eid, offset } => {
                let Some(offset) = offset else {
                    return err(line, format!("mark {k} needs an offset in a metric graph"));
                };
                if !graph.has_dart(2 * eid) {
                    return err(line, format!("mark {k} on unknown edge {eid}"));
                }
                DeltaPoint::Interior {
                    dart: 2 * eid,
                    offset,
                }
            }
        };
        parsed_marks.push((k, point, line));
    }
    let marks = collect_marks(parsed_marks)?;
    let g = MetricMarkedGraph::new(graph, lengths, marks).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok((doc.name, g))
}

/// Parses the stratum form: `mark <k> v <vid>` or `mark <k> e <eid>`
/// choose slot `k`; lengths are carried by the format but ignored.
pub fn parse_stratum(text: &str) -> Result<(String, StratumIndex), ParseError> {
    let doc = scan(text)?;
    let (graph, _) = build_graph_part(&doc)?;
    let mut parsed = Vec::new();
    for (k, spec, line) in doc.marks {
        let slot = match spec {
            MarkSpec::AtVertex(v) => {
                if !graph.has_vertex(v) {
                    return err(line, format!("slot {k} on unknown vertex {v}"));
                }
                Slot::Vertex(v)
            }
            MarkSpec::OnEdge { eid, offset } => {
                if offset.is_some() {
                    return err(line, format!("slot {k} must not carry an offset"));
                }
                if !graph.has_dart(2 * eid) {
                    return err(line, format!("slot {k} on unknown edge {eid}"));
                }
                Slot::EdgeSlot(graph.edge_of(2 * eid))
            }
        };
        parsed.push((k, slot, line));
    }
    let slots = collect_marks(parsed)?;
    let stratum = StratumIndex::new(graph, slots).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok((doc.name, stratum))
}

fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Stable printable edge ids: `eid = dart/2` when the graph still uses
/// the parser's dart layout, else a fresh sequential numbering.
fn printable_edge_ids(graph: &Graph) -> BTreeMap<DartId, u32> {
    let layout_ok = graph
        .edges()
        .iter()
        .all(|e| {
            let d = e.canonical_dart();
            d % 2 == 0 && graph.op(d) == d + 1
        });
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let d = e.canonical_dart();
            (d, if layout_ok { d / 2 } else { i as u32 })
        })
        .collect()
}

/// Renders a metric marked graph in the text format.
pub fn write_metric_graph(name: &str, g: &MetricMarkedGraph<Q>) -> String {
    let graph = g.graph();
    let ids = printable_edge_ids(graph);
    let mut out = String::new();
    let _ = writeln!(out, "graph {name}");
    for &v in graph.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for e in graph.edges() {
        let d = e.canonical_dart();
        let (a, b) = graph.endpoints(e);
        let _ = writeln!(
            out,
            "e {} {a} {b} {}",
            ids[&d],
            format_rational(g.length(e))
        );
    }
    for (i, m) in g.marks().iter().enumerate() {
        let k = i + 1;
        match m {
            DeltaPoint::AtVertex(v) => {
                let _ = writeln!(out, "mark {k} v {v}");
            }
            DeltaPoint::Interior { dart, offset } => {
                let _ = writeln!(
                    out,
                    "mark {k} e {} {}",
                    ids[dart],
                    format_rational(offset)
                );
            }
        }
    }
    out
}

/// Renders a stratum index; edges get the placeholder length 1.
pub fn write_stratum(name: &str, s: &StratumIndex) -> String {
    let graph = s.graph();
    let ids = printable_edge_ids(graph);
    let mut out = String::new();
    let _ = writeln!(out, "graph {name}");
    for &v in graph.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for e in graph.edges() {
        let (a, b) = graph.endpoints(e);
        let _ = writeln!(out, "e {} {a} {b} 1", ids[&e.canonical_dart()]);
    }
    for (i, slot) in s.slots().iter().enumerate() {
        let k = i + 1;
        match slot {
            Slot::Vertex(v) => {
                let _ = writeln!(out, "mark {k} v {v}");
            }
            Slot::EdgeSlot(e) => {
                let _ = writeln!(out, "mark {k} e {}", ids[&e.canonical_dart()]);
            }
        }
    }
    out
}
