//! Plain-text instance files.
//!
//! ```text
//! p multicut <vertex|edge> <n> <m> <k>
//! e <u> <v>        (m lines)
//! t <s> <t>        (k lines)
//! w <v>            (optional, star instances)
//! ```
//!
//! Ids are 1-based in files and 0-based in memory. Lines starting with `#`
//! and blank lines are ignored.

use std::fmt::Write as _;

use crate::graph::{Graph, PairSet, VertexSet};
use crate::instance::{first_unseparated, MulticutInstance, StarInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Vertex,
    Edge,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Vertex => "vertex",
            Kind::Edge => "edge",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub kind: Kind,
    pub g: Graph,
    pub t: PairSet,
    pub w: Option<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<usize, ParseError> {
    match tok {
        None => err(line, format!("missing {what}")),
        Some(t) => t
            .parse()
            .or_else(|_| err(line, format!("{what} '{t}' is not a non-negative integer"))),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut header: Option<(Kind, usize, usize, usize)> = None;
    let mut g = Graph::new(0);
    let mut t = PairSet::new();
    let mut w: Option<VertexSet> = None;
    let (mut edges, mut pairs) = (0, 0);
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let tag = toks.next().unwrap();
        let vertex = |tok: Option<&str>, n: usize| -> Result<usize, ParseError> {
            let v = number(line, tok, "vertex id")?;
            if v == 0 || v > n {
                return err(line, format!("vertex id {v} out of range 1..={n}"));
            }
            Ok(v - 1)
        };
        match (tag, header) {
            ("p", None) => {
                if toks.next() != Some("multicut") {
                    return err(
                        line,
                        "header must read 'p multicut <vertex|edge> <n> <m> <k>'",
                    );
                }
                let kind = match toks.next() {
                    Some("vertex") => Kind::Vertex,
                    Some("edge") => Kind::Edge,
                    other => return err(line, format!("unknown problem kind {other:?}")),
                };
                let n = number(line, toks.next(), "n")?;
                let m = number(line, toks.next(), "m")?;
                let k = number(line, toks.next(), "k")?;
                header = Some((kind, n, m, k));
                g = Graph::new(n);
            }
            ("p", Some(_)) => return err(line, "duplicate header"),
            (_, None) => return err(line, "expected header line first"),
            ("e", Some((_, n, _, _))) => {
                let (u, v) = (vertex(toks.next(), n)?, vertex(toks.next(), n)?);
                if u == v {
                    return err(line, format!("self-loop on vertex {}", u + 1));
                }
                if !g.add_edge(u, v) {
                    return err(line, format!("duplicate edge {} {}", u + 1, v + 1));
                }
                edges += 1;
            }
            ("t", Some((_, n, _, _))) => {
                let (a, b) = (vertex(toks.next(), n)?, vertex(toks.next(), n)?);
                t.push(a, b);
                pairs += 1;
            }
            ("w", Some((kind, n, _, _))) => {
                if kind == Kind::Edge {
                    return err(line, "w lines are only allowed in vertex instances");
                }
                let v = vertex(toks.next(), n)?;
                w.get_or_insert_with(|| VertexSet::new(n)).insert(v);
            }
            (other, _) => return err(line, format!("unknown line type '{other}'")),
        }
        if let Some(extra) = toks.next() {
            return err(line, format!("unexpected token '{extra}'"));
        }
    }

    let Some((kind, _, m, k)) = header else {
        return err(last_line.max(1), "missing header");
    };
    if edges != m {
        return err(
            last_line,
            format!("header declares {m} edges, found {edges}"),
        );
    }
    if pairs != k {
        return err(
            last_line,
            format!("header declares {k} terminal pairs, found {pairs}"),
        );
    }
    if let Some(w) = &w {
        if let Some((a, b)) = first_unseparated(&g, &t, w) {
            return err(
                last_line,
                format!("W does not separate terminal pair {} {}", a + 1, b + 1),
            );
        }
    }
    Ok(InstanceFile { kind, g, t, w })
}

impl InstanceFile {
    pub fn new(kind: Kind, g: Graph, t: PairSet) -> Self {
        InstanceFile {
            kind,
            g,
            t,
            w: None,
        }
    }

    pub fn to_multicut(&self, p: usize) -> MulticutInstance {
        MulticutInstance::new(self.g.clone(), self.t.clone(), p).expect("parsed ids are in range")
    }

    /// The star instance when the file lists `w` vertices.
    pub fn to_star(&self, p: usize) -> Option<StarInstance> {
        let w = self.w.clone()?;
        Some(
            StarInstance::new(self.g.clone(), self.t.clone(), w, p)
                .expect("validated while parsing"),
        )
    }

    /// Edges sorted, pairs in stored order, then `w`.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let edges: Vec<(usize, usize)> = self.g.edges().collect();
        let _ = writeln!(
            out,
            "p multicut {} {} {} {}",
            self.kind.name(),
            self.g.universe(),
            edges.len(),
            self.t.len()
        );
        for (u, v) in edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        for (a, b) in self.t.iter() {
            let _ = writeln!(out, "t {} {}", a + 1, b + 1);
        }
        if let Some(w) = &self.w {
            for v in w {
                let _ = writeln!(out, "w {}", v + 1);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse_instance("p multicut vertex 2 1 1\ne 1 2\nt 1 2\n").unwrap();
        assert_eq!(f.kind, Kind::Vertex);
        assert!(f.g.has_edge(0, 1));
        assert_eq!(f.t, PairSet::from_pairs([(0, 1)]));
        assert_eq!(f.w, None);
    }

    #[test]
    fn comments_and_star_lines() {
        let text = "# a path\np multicut vertex 3 2 1\n\ne 1 2\ne 2 3\n# pairs\nt 1 3\nw 2\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.w, Some(VertexSet::from_iter(3, [1])));
        assert_eq!(f.to_star(1).unwrap().w.len(), 1);
    }

    #[test]
    fn rejections_carry_line_numbers() {
        let cases = [
            ("p multicut vertex 2 1 0\ne 1 1\n", 2, "self-loop"),
            (
                "p multicut vertex 2 2 0\ne 1 2\ne 2 1\n",
                3,
                "duplicate edge",
            ),
            ("p multicut vertex 2 1 0\ne 1 3\n", 2, "out of range"),
            (
                "p multicut vertex 2 1 0\ne 1 x\n",
                2,
                "not a non-negative integer",
            ),
            ("e 1 2\n", 1, "header"),
            ("p multicut vertex 2 2 0\ne 1 2\n", 2, "declares 2 edges"),
            (
                "p multicut vertex 4 2 1\ne 1 2\ne 2 3\nt 1 3\nw 4\n",
                5,
                "W does not separate",
            ),
            ("p multicut edge 2 1 0\ne 1 2\nw 1\n", 3, "only allowed"),
            ("p multicut vertex 2 1 0\ne 1 2 3\n", 2, "unexpected token"),
            ("p multicut vertex 2 1 0\nq 1 2\n", 2, "unknown line type"),
        ];
        for (text, line, needle) in cases {
            let e = parse_instance(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn print_round_trips() {
        let text = "p multicut edge 4 3 2\ne 1 2\ne 2 3\ne 3 4\nt 1 4\nt 2 4\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.print(), text);
        assert_eq!(parse_instance(&f.print()).unwrap(), f);
    }
}
