//! DIMACS-style edge lists.
//!
//! ```text
//! c comment
//! p edge <n> <m>
//! e <u> <v>        (1-based ids)
//! ```
//!
//! Duplicate edges are collapsed. The edge count on the `p` line is not
//! enforced.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("{what} is not a nonnegative integer: {tok:?}")))
}

pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if n.is_some() {
                    return Err(err(line, "second problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(err(line, format!("unsupported problem type {other:?}"))),
                }
                n = Some(number(toks.next(), line, "vertex count")?);
                number(toks.next(), line, "edge count")?;
            }
            "e" => {
                let n = n.ok_or_else(|| err(line, "edge before the problem line"))?;
                let u = number(toks.next(), line, "endpoint")?;
                let v = number(toks.next(), line, "endpoint")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(err(line, format!("vertex {x} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(err(line, format!("self-loop on vertex {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(err(line, format!("unknown line type {other:?}"))),
        }
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens"));
        }
    }
    let n = n.ok_or_else(|| err(text.lines().count().max(1), "missing problem line"))?;
    Ok(Graph::from_edges(n, edges).expect("ids were range-checked"))
}

/// Writes the live edges of `g`, sorted, with 1-based ids.
pub fn serialize_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a String");
    }
    out
}
