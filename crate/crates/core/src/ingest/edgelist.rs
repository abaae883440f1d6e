use std::fmt::Write as _;
use std::str::FromStr;

use super::IdMap;
use crate::error::{Error, Result};
use crate::graph::{GeoPoint, GraphBuilder, RoutingGraph};

const HEADER: &str = "graph v1";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses the `graph v1` edge-list format.
///
/// ```text
/// graph v1
/// # comment
/// n <ext-id> <lat> <lon>
/// e <ext-id> <ext-id> [weight-meters]
/// ```
///
/// Edges may precede the nodes they reference; an edge whose endpoint is
/// never declared is an error.
pub fn parse_edgelist(bytes: &[u8]) -> Result<(RoutingGraph, IdMap)> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        parse_err(line, "input is not valid UTF-8")
    })?;

    let mut ids = IdMap::new();
    let mut builder = GraphBuilder::new();
    let mut edges = Vec::new();
    let mut seen_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content.split_whitespace().collect::<Vec<_>>().join(" ") != HEADER {
                return Err(parse_err(line, format!("expected header `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("n") => {
                let id: i64 = field(toks.next(), line, "node id")?;
                let lat: f64 = field(toks.next(), line, "latitude")?;
                let lon: f64 = field(toks.next(), line, "longitude")?;
                let p = GeoPoint::new(lat, lon).map_err(|e| parse_err(line, e.to_string()))?;
                ids.insert(id)
                    .map_err(|_| parse_err(line, format!("node {id} declared twice")))?;
                builder.add_node(p);
            }
            Some("e") => {
                let a: i64 = field(toks.next(), line, "endpoint")?;
                let b: i64 = field(toks.next(), line, "endpoint")?;
                let w: Option<f64> = match toks.next() {
                    Some(t) => Some(field(Some(t), line, "weight")?),
                    None => None,
                };
                if let Some(w) = w {
                    if !(w.is_finite() && w > 0.0) {
                        return Err(parse_err(line, format!("weight {w} must be positive")));
                    }
                }
                edges.push((line, a, b, w));
            }
            Some(other) => return Err(parse_err(line, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing fields"));
        }
    }
    if !seen_header {
        return Err(parse_err(1, format!("expected header `{HEADER}`")));
    }

    for (line, a, b, w) in edges {
        let u = ids
            .internal(a)
            .ok_or_else(|| parse_err(line, format!("edge endpoint {a} is not a declared node")))?;
        let v = ids
            .internal(b)
            .ok_or_else(|| parse_err(line, format!("edge endpoint {b} is not a declared node")))?;
        builder
            .add_edge(u, v, w)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok((builder.build(), ids))
}

/// Serializes a graph so that [`parse_edgelist`] reproduces it exactly.
pub fn write_edgelist(graph: &RoutingGraph, ids: &IdMap) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for v in graph.nodes() {
        let p = graph.point(v);
        writeln!(out, "n {} {} {}", ids.external(v), p.lat(), p.lon()).unwrap();
    }
    for (u, v, w) in graph.edges() {
        writeln!(out, "e {} {} {}", ids.external(u), ids.external(v), w).unwrap();
    }
    out
}
