//! Certificate text format.
//!
//! ```text
//! cert r
//! init v1 ... vr
//! double j1:v j2:v ...
//! collapse keep j:v j:v ... map j:from->to ...
//! ```
//!
//! Sides are 1-based in `side:vertex` tokens; `#` starts a comment.
//! Serialization is deterministic and round-trips byte-identically.

use std::collections::BTreeMap;

use super::{Certificate, CollapseStep, DoublingStep, Step};
use crate::hypergraph::{logical_lines, SideSubset, VertexId};
use crate::{Error, Result};

pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = format!("cert {}\n", cert.arity);
    out.push_str("init");
    for v in &cert.initial {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    for step in &cert.steps {
        match step {
            Step::Double(d) => {
                out.push_str("double");
                for (j, v) in d.doubled.iter() {
                    out.push_str(&format!(" {}:{}", j + 1, v));
                }
                out.push('\n');
            }
            Step::Collapse(c) => {
                out.push_str("collapse keep");
                for (j, v) in c.kept.iter() {
                    out.push_str(&format!(" {}:{}", j + 1, v));
                }
                out.push_str(" map");
                for (j, m) in c.mapping.iter().enumerate() {
                    for (&from, &to) in m {
                        out.push_str(&format!(" {}:{}->{}", j + 1, from, to));
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}

fn parse_side_vertex(tok: &str, arity: usize, line: usize) -> Result<(usize, VertexId)> {
    let (j, v) = tok
        .split_once(':')
        .ok_or_else(|| Error::Parse { line, msg: format!("expected side:vertex, got `{tok}`") })?;
    let j: usize = j
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("bad side `{j}`") })?;
    if j < 1 || j > arity {
        return Err(Error::Parse { line, msg: format!("side {j} out of range 1..={arity}") });
    }
    let v: VertexId = v
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("bad vertex `{v}`") })?;
    Ok((j - 1, v))
}

pub fn parse_certificate(input: &str) -> Result<Certificate> {
    let mut lines = logical_lines(input);
    let (lno, header) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let arity: usize = header
        .strip_prefix("cert ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line: lno, msg: "expected `cert r`".into() })?;
    let (lno, init_line) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "missing init line".into() })?;
    let initial = init_line
        .strip_prefix("init")
        .ok_or_else(|| Error::Parse { line: lno, msg: "expected `init v1 ... vr`".into() })?
        .split_whitespace()
        .map(|t| {
            t.parse::<VertexId>()
                .map_err(|_| Error::Parse { line: lno, msg: format!("bad vertex `{t}`") })
        })
        .collect::<Result<Vec<_>>>()?;
    if initial.len() != arity {
        return Err(Error::Parse {
            line: lno,
            msg: format!("init has {} vertices, arity is {arity}", initial.len()),
        });
    }

    let mut steps = Vec::new();
    for (lno, line) in lines {
        if let Some(rest) = line.strip_prefix("double") {
            let mut doubled = SideSubset::empty(arity);
            for tok in rest.split_whitespace() {
                let (j, v) = parse_side_vertex(tok, arity, lno)?;
                doubled.insert(j, v);
            }
            steps.push(Step::Double(DoublingStep { doubled }));
        } else if let Some(rest) = line.strip_prefix("collapse keep") {
            let (keep_part, map_part) = rest
                .split_once(" map")
                .ok_or_else(|| Error::Parse { line: lno, msg: "collapse line needs ` map`".into() })?;
            let mut kept = SideSubset::empty(arity);
            for tok in keep_part.split_whitespace() {
                let (j, v) = parse_side_vertex(tok, arity, lno)?;
                kept.insert(j, v);
            }
            let mut mapping: Vec<BTreeMap<VertexId, VertexId>> = vec![BTreeMap::new(); arity];
            for tok in map_part.split_whitespace() {
                let (from_tok, to_tok) = tok
                    .split_once("->")
                    .ok_or_else(|| Error::Parse { line: lno, msg: format!("expected from->to in `{tok}`") })?;
                let (j, from) = parse_side_vertex(from_tok, arity, lno)?;
                let to: VertexId = to_tok
                    .parse()
                    .map_err(|_| Error::Parse { line: lno, msg: format!("bad vertex `{to_tok}`") })?;
                mapping[j].insert(from, to);
            }
            steps.push(Step::Collapse(CollapseStep { kept, mapping }));
        } else {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected `double` or `collapse keep`, got `{line}`"),
            });
        }
    }
    Ok(Certificate { arity, initial, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::NamedCertificate;

    #[test]
    fn round_trip_byte_identical() {
        let cert = NamedCertificate::SetGraph(3).certify().unwrap();
        let text = render_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(render_certificate(&back), text);
    }

    #[test]
    fn parse_collapse_line() {
        let text = "cert 2\ninit 0 0\ndouble 1:0 2:0\ncollapse keep 1:0 2:0 map 1:1->0 2:1->0\n";
        let cert = parse_certificate(text).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert_eq!(render_certificate(&cert), text);
        let replay = super::super::verify_certificate(&cert).unwrap();
        assert_eq!(replay.graph.edge_count(), 1);
    }

    #[test]
    fn empty_doubling_line() {
        let text = "cert 2\ninit 0 0\ndouble\n";
        let cert = parse_certificate(text).unwrap();
        assert_eq!(cert.doubling_count(), 1);
        assert_eq!(render_certificate(&cert), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "cert 2\ninit 0 0\nfrobnicate\n";
        match parse_certificate(bad) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("expected line-3 parse error, got {other:?}"),
        }
    }
}
