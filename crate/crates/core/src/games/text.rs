//! Text formats for string sets and games.
//!
//! String sets:
//! ```text
//! strings r n
//! 112
//! 121
//! ```
//!
//! Games: question lines give the question set (alphabets are the
//! projections), `answers j:` lines declare answer alphabet sizes, `accept`
//! lines list the accepting rows of the predicate table.
//! ```text
//! game r
//! answers 1: 2
//! answers 2: 2
//! question: 0 1
//! accept 0 1 1 0
//! ```

use std::collections::BTreeSet;

use super::dhj::StringSet;
use super::Game;
use crate::hypergraph::{logical_lines, PartiteHypergraph, VertexId};
use crate::{Error, Result};

pub fn render_string_set(s: &StringSet) -> String {
    let mut out = format!("strings {} {}\n", s.r, s.n);
    for string in &s.strings {
        for sym in string {
            out.push((b'0' + sym) as char);
        }
        out.push('\n');
    }
    out
}

pub fn parse_string_set(input: &str) -> Result<StringSet> {
    let mut lines = logical_lines(input);
    let (lno, header) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let mut it = header.split_whitespace();
    if it.next() != Some("strings") {
        return Err(Error::Parse { line: lno, msg: "expected `strings r n`".into() });
    }
    let r: u8 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: lno, msg: "bad r".into() })?;
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: lno, msg: "bad n".into() })?;
    let mut strings = Vec::new();
    for (lno, line) in lines {
        let s: Vec<u8> = line
            .chars()
            .map(|c| match c {
                '1'..='9' => Ok(c as u8 - b'0'),
                _ => Err(Error::Parse { line: lno, msg: format!("bad symbol `{c}`") }),
            })
            .collect::<Result<_>>()?;
        if s.len() != n {
            return Err(Error::Parse {
                line: lno,
                msg: format!("string has length {}, expected {n}", s.len()),
            });
        }
        strings.push(s);
    }
    StringSet::new(r, n, strings)
}

pub fn render_game(g: &Game) -> String {
    let mut out = format!("game {}\n", g.arity());
    for (j, &c) in g.answer_counts.iter().enumerate() {
        out.push_str(&format!("answers {}: {}\n", j + 1, c));
    }
    for e in g.edge_list() {
        out.push_str("question:");
        for v in e {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    let mut answers = vec![0u32; g.arity()];
    for (i, e) in g.edge_list().iter().enumerate() {
        loop {
            if g.accepts(i, &answers) {
                out.push_str("accept");
                for v in e {
                    out.push_str(&format!(" {v}"));
                }
                for a in &answers {
                    out.push_str(&format!(" {a}"));
                }
                out.push('\n');
            }
            if !super::next_tuple(&mut answers, &g.answer_counts) {
                break;
            }
        }
    }
    out
}

pub fn parse_game(input: &str) -> Result<Game> {
    let mut lines = logical_lines(input).peekable();
    let (lno, header) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    let r: usize = header
        .strip_prefix("game ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line: lno, msg: "expected `game r`".into() })?;

    let mut answer_counts = Vec::with_capacity(r);
    for j in 1..=r {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("missing answers {j}") })?;
        let c: u32 = line
            .strip_prefix(&format!("answers {j}:"))
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| Error::Parse { line: lno, msg: format!("expected `answers {j}: k`") })?;
        answer_counts.push(c);
    }

    let mut edges: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut accepts: BTreeSet<(Vec<VertexId>, Vec<u32>)> = BTreeSet::new();
    for (lno, line) in lines {
        if let Some(rest) = line.strip_prefix("question:") {
            let e = parse_ints(rest, lno)?;
            if e.len() != r {
                return Err(Error::Parse { line: lno, msg: format!("question needs {r} entries") });
            }
            edges.insert(e);
        } else if let Some(rest) = line.strip_prefix("accept") {
            let vals = parse_ints(rest, lno)?;
            if vals.len() != 2 * r {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("accept needs {r} questions and {r} answers"),
                });
            }
            accepts.insert((vals[..r].to_vec(), vals[r..].to_vec()));
        } else {
            return Err(Error::Parse { line: lno, msg: format!("unexpected line `{line}`") });
        }
    }
    let sides: Vec<BTreeSet<VertexId>> = (0..r)
        .map(|j| edges.iter().map(|e| e[j]).collect())
        .collect();
    let questions = PartiteHypergraph::new(r, sides, edges)?;
    Game::new(questions, answer_counts, move |e, a| {
        accepts.contains(&(e.to_vec(), a.to_vec()))
    })
}

fn parse_ints(text: &str, line: usize) -> Result<Vec<u32>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Parse { line, msg: format!("bad integer `{t}`") })
        })
        .collect()
}
