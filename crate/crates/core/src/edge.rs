//! Edge multicut through the vertex solver.
//!
//! Every edge `uv` gets a subdivision vertex, and every original vertex is
//! replaced by `p + 1` pairwise adjacent copies, each adjacent to the
//! subdivision vertices of its edges. A budget of `p` can never remove all
//! copies of a vertex, so deleting copies never helps and solutions use
//! subdivision vertices only.

use std::collections::BTreeMap;

use crate::compression::{solve, SolveOptions, SolveReport, Status};
use crate::graph::{Graph, PairSet, VertexSet};
use crate::instance::MulticutInstance;
use crate::oracle::Certificate;

pub const DEFAULT_VERTEX_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EdgeError {
    #[error("reduction needs {needed} copy vertices, over the cap of {cap}")]
    TooLarge { needed: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReduction {
    pub instance: MulticutInstance,
    /// `copies[v]` lists the copies of original vertex `v`.
    pub copies: Vec<Vec<usize>>,
    /// The original edge behind each subdivision vertex.
    pub edge_of: BTreeMap<usize, (usize, usize)>,
}

impl EdgeReduction {
    /// The edges whose subdivision vertices are in `s`; copies are ignored.
    pub fn lift(&self, s: &VertexSet) -> Vec<(usize, usize)> {
        s.iter()
            .filter_map(|v| self.edge_of.get(&v).copied())
            .collect()
    }
}

/// Builds the vertex instance. Every pair `(s, t)` becomes the pairs
/// `(s_i, t_i)` over all copy indices `i`, so that deleting a few copies of a
/// terminal cannot stand in for cutting edges.
pub fn edge_to_vertex(
    g: &Graph,
    t: &PairSet,
    p: usize,
    cap: usize,
) -> Result<EdgeReduction, EdgeError> {
    let n = g.universe();
    let copies_per = p + 1;
    let needed = copies_per.saturating_mul(n);
    if needed > cap {
        return Err(EdgeError::TooLarge { needed, cap });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let total = needed + edges.len();
    let mut h = Graph::new(total);
    let copies: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..copies_per).map(|i| v * copies_per + i).collect())
        .collect();
    for (v, twins) in copies.iter().enumerate() {
        if !g.contains(v) {
            for &c in twins {
                h = h.remove_vertex(c);
            }
            continue;
        }
        for (a, &x) in twins.iter().enumerate() {
            for &y in &twins[a + 1..] {
                h.add_edge(x, y);
            }
        }
    }
    let mut edge_of = BTreeMap::new();
    for (j, &(u, v)) in edges.iter().enumerate() {
        let x = needed + j;
        edge_of.insert(x, (u, v));
        for &c in copies[u].iter().chain(&copies[v]) {
            h.add_edge(x, c);
        }
    }
    let mut pairs = PairSet::new();
    for (a, b) in t.iter() {
        for (&x, &y) in copies[a].iter().zip(&copies[b]) {
            pairs.push(x, y);
        }
    }
    let instance = MulticutInstance::new(h, pairs, p).expect("copies of terminals exist");
    Ok(EdgeReduction {
        instance,
        copies,
        edge_of,
    })
}

pub fn is_edge_multicut(g: &Graph, t: &PairSet, cut: &[(usize, usize)]) -> bool {
    let mut h = Graph::new(g.universe()).induced(g.vertices());
    for (u, v) in g.edges() {
        if !cut.contains(&(u, v)) && !cut.contains(&(v, u)) {
            h.add_edge(u, v);
        }
    }
    let none = h.empty_set();
    t.iter().all(|(a, b)| a != b && !h.connected(a, b, &none))
}

/// Checks an edge cutset against the original edge instance.
pub fn verify_edges(g: &Graph, t: &PairSet, p: usize, cut: &[(usize, usize)]) -> Certificate {
    Certificate::from_checks([
        ("edges_exist", cut.iter().all(|&(u, v)| g.has_edge(u, v))),
        ("is_edge_multicut", is_edge_multicut(g, t, cut)),
        ("size_within_budget", cut.len() <= p),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSolveReport {
    /// Cut edges when solved.
    pub edges: Option<Vec<(usize, usize)>>,
    /// The report of the vertex solve on the reduced instance.
    pub inner: SolveReport,
    /// Present when solved; checked against the edge instance.
    pub certificate: Option<Certificate>,
}

/// Solves edge multicut through [`edge_to_vertex`].
pub fn solve_edge(
    g: &Graph,
    t: &PairSet,
    p: usize,
    opts: &SolveOptions,
    cap: usize,
) -> Result<EdgeSolveReport, EdgeError> {
    let red = edge_to_vertex(g, t, p, cap)?;
    let inner = solve(&red.instance, opts);
    let (edges, certificate) = match &inner.status {
        Status::Solved(s) => {
            let cut = red.lift(s);
            let cert = verify_edges(g, t, p, &cut);
            assert!(cert.all_pass, "lifted edge cut {cut:?} failed verification");
            (Some(cut), Some(cert))
        }
        _ => (None, None),
    };
    Ok(EdgeSolveReport {
        edges,
        inner,
        certificate,
    })
}
