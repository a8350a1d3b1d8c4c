//! The SGN line format.
//!
//! ```text
//! # comment
//! v <id> [weight]        vertex, weight defaults to 1
//! e <id1> <id2> <weight> undirected edge
//! auto-declare           edges may name vertices that have no `v` line
//! ```
//!
//! Lines may appear in any order. Blank lines and lines starting with `#` are
//! ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::{EdgeKey, Graph, GraphError, VertexId, Weight, DEFAULT_VERTEX_WEIGHT};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn err(line: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
    ParseError {
        line,
        kind: kind.into(),
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    err(line, ParseErrorKind::Malformed(msg.into()))
}

fn parse_id(line: usize, tok: &str) -> Result<VertexId, ParseError> {
    VertexId::new(tok).map_err(|e| err(line, e))
}

fn parse_weight(line: usize, tok: &str) -> Result<Weight, ParseError> {
    let w: Weight = tok
        .parse()
        .map_err(|_| malformed(line, format!("bad weight {tok:?}")))?;
    if w.is_finite() && w > 0.0 {
        Ok(w)
    } else {
        Err(err(line, GraphError::InvalidWeight(w)))
    }
}

struct EdgeLine {
    line: usize,
    a: VertexId,
    b: VertexId,
    weight: Weight,
}

/// Parses an SGN document. Errors carry the 1-based line number.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    let mut edges = Vec::new();
    let mut auto_declare = false;

    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        match toks.as_slice() {
            ["v", id] => g.add_vertex(parse_id(line, id)?, DEFAULT_VERTEX_WEIGHT),
            ["v", id, w] => g.add_vertex(parse_id(line, id)?, parse_weight(line, w)?),
            ["e", a, b, w] => {
                let (a, b) = (parse_id(line, a)?, parse_id(line, b)?);
                if a == b {
                    return Err(err(line, GraphError::SelfLoop(a)));
                }
                edges.push(EdgeLine {
                    line,
                    a,
                    b,
                    weight: parse_weight(line, w)?,
                });
                Ok(())
            }
            ["auto-declare"] => {
                auto_declare = true;
                Ok(())
            }
            [kw, ..] => {
                return Err(malformed(
                    line,
                    format!("unexpected {} tokens starting with {kw:?}", toks.len()),
                ))
            }
            [] => unreachable!("blank lines skipped"),
        }
        .map_err(|e| err(line, e))?;
    }

    for e in edges {
        for v in [&e.a, &e.b] {
            if !g.contains_vertex(v) {
                if auto_declare {
                    g.add_vertex(v.clone(), DEFAULT_VERTEX_WEIGHT)
                        .map_err(|k| err(e.line, k))?;
                } else {
                    return Err(err(e.line, GraphError::UnknownVertex(v.clone())));
                }
            }
        }
        if g.edge_weight(&e.a, &e.b).is_some() {
            return Err(err(
                e.line,
                GraphError::DuplicateEdge(EdgeKey::new(e.a, e.b)),
            ));
        }
        g.insert_edge(e.a, e.b, e.weight)
            .map_err(|k| err(e.line, k))?;
    }
    Ok(g)
}

/// Canonical SGN: vertices in id order with explicit weights, then edges in
/// canonical order. Weights use the shortest representation that parses back
/// to the same value.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    for (id, w) in g.vertices() {
        writeln!(out, "v {id} {w}").expect("write to string");
    }
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.key.first(), e.key.second(), e.weight)
            .expect("write to string");
    }
    out
}
