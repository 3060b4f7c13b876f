//! Text format for hypergraphs.
//!
//! ```text
//! hypergraph r
//! side 1: id id ...
//! ...
//! side r: id id ...
//! edge: v1 v2 ... vr
//! ```
//!
//! Tokens are whitespace-separated; `#` starts a comment. Sides are 1-based
//! in the file. Serialization is deterministic (sorted ids and edges) and
//! round-trips byte-identically.

use std::collections::BTreeSet;

use super::{PartiteHypergraph, VertexId};
use crate::{Error, Result};

pub fn parse_hypergraph(input: &str) -> Result<PartiteHypergraph> {
    let mut lines = logical_lines(input);
    let (lno, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 0, msg: "empty input".into() })?;
    let mut it = header.split_whitespace();
    if it.next() != Some("hypergraph") {
        return Err(Error::Parse { line: lno, msg: "expected `hypergraph r`".into() });
    }
    let arity: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: lno, msg: "bad arity".into() })?;
    if it.next().is_some() {
        return Err(Error::Parse { line: lno, msg: "trailing tokens after arity".into() });
    }

    let mut sides: Vec<BTreeSet<VertexId>> = Vec::with_capacity(arity);
    for j in 1..=arity {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("missing side {j}") })?;
        let rest = line
            .strip_prefix(&format!("side {j}:"))
            .ok_or_else(|| Error::Parse { line: lno, msg: format!("expected `side {j}:`") })?;
        let ids = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<VertexId>()
                    .map_err(|_| Error::Parse { line: lno, msg: format!("bad vertex id `{t}`") })
            })
            .collect::<Result<BTreeSet<_>>>()?;
        sides.push(ids);
    }

    let mut edges = BTreeSet::new();
    for (lno, line) in lines {
        let rest = line
            .strip_prefix("edge:")
            .ok_or_else(|| Error::Parse { line: lno, msg: "expected `edge:` line".into() })?;
        let e = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<VertexId>()
                    .map_err(|_| Error::Parse { line: lno, msg: format!("bad vertex id `{t}`") })
            })
            .collect::<Result<Vec<_>>>()?;
        if e.len() != arity {
            return Err(Error::Parse {
                line: lno,
                msg: format!("edge has {} entries, arity is {arity}", e.len()),
            });
        }
        edges.insert(e);
    }
    PartiteHypergraph::new(arity, sides, edges)
}

pub fn render_hypergraph(g: &PartiteHypergraph) -> String {
    let mut out = format!("hypergraph {}\n", g.arity());
    for (j, s) in g.sides().iter().enumerate() {
        out.push_str(&format!("side {}:", j + 1));
        for v in s {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for e in g.edges() {
        out.push_str("edge:");
        for v in e {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

/// Non-empty lines with comments stripped, 1-based line numbers retained.
pub(crate) fn logical_lines(input: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    input.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            None
        } else {
            Some((i + 1, trimmed.to_string()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::NamedHypergraph;

    #[test]
    fn round_trip() {
        let g = NamedHypergraph::Qr(3).build().unwrap();
        let text = render_hypergraph(&g);
        let g2 = parse_hypergraph(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(render_hypergraph(&g2), text);
    }

    #[test]
    fn comments_and_errors() {
        let ok = "# a graph\nhypergraph 2\nside 1: 0 1\nside 2: 0\nedge: 0 0 # first\nedge: 1 0\n";
        assert_eq!(parse_hypergraph(ok).unwrap().edge_count(), 2);
        let bad = "hypergraph 2\nside 1: 0\nside 2: 0\nedge: 0\n";
        match parse_hypergraph(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
