use crate::graph::{Graph, PairSet, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("terminal {0} is not a vertex of the graph")]
    UnknownTerminal(usize),
    #[error("W contains {0}, which is not a vertex of the graph")]
    UnknownWVertex(usize),
    #[error("W does not separate terminal pair ({0}, {1})")]
    WNotMulticut(usize, usize),
}

/// `(G, T, p)`: find a vertex multicut of size at most `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulticutInstance {
    pub g: Graph,
    pub t: PairSet,
    pub p: usize,
}

impl MulticutInstance {
    pub fn new(g: Graph, t: PairSet, p: usize) -> Result<Self, InstanceError> {
        for (a, b) in t.iter() {
            for v in [a, b] {
                if !g.contains(v) {
                    return Err(InstanceError::UnknownTerminal(v));
                }
            }
        }
        Ok(MulticutInstance { g, t, p })
    }
}

/// `(G, T, W, p)` where `W` is a multicut of `(G, T)`. A solution is a set of
/// at most `p` vertices, disjoint from `W`, that is a multicut of `(G, T)` and
/// a multiway cut of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarInstance {
    pub g: Graph,
    pub t: PairSet,
    pub w: VertexSet,
    pub p: usize,
}

impl StarInstance {
    pub fn new(g: Graph, t: PairSet, w: VertexSet, p: usize) -> Result<Self, InstanceError> {
        for v in &w {
            if !g.contains(v) {
                return Err(InstanceError::UnknownWVertex(v));
            }
        }
        for (a, b) in t.iter() {
            for v in [a, b] {
                if !g.contains(v) {
                    return Err(InstanceError::UnknownTerminal(v));
                }
            }
        }
        if let Some((a, b)) = first_unseparated(&g, &t, &w) {
            return Err(InstanceError::WNotMulticut(a, b));
        }
        Ok(StarInstance { g, t, w, p })
    }

    /// Skips validation; callers guarantee the multicut invariant.
    pub(crate) fn new_unchecked(g: Graph, t: PairSet, w: VertexSet, p: usize) -> Self {
        debug_assert!(
            first_unseparated(&g, &t, &w).is_none(),
            "W must stay a multicut"
        );
        StarInstance { g, t, w, p }
    }

    /// Vertices that may be deleted: `V \ W`.
    pub fn free_vertices(&self) -> VertexSet {
        self.g.vertices().difference(&self.w)
    }
}

/// The first pair not separated by deleting `s`, if any. A pair with an
/// endpoint in `s` counts as separated.
pub fn first_unseparated(g: &Graph, t: &PairSet, s: &VertexSet) -> Option<(usize, usize)> {
    if t.is_empty() {
        return None;
    }
    let label = g.component_labels(s);
    t.iter().find(|&(a, b)| {
        !s.contains(a) && !s.contains(b) && label[a] != usize::MAX && label[a] == label[b]
    })
}

pub fn is_multicut(g: &Graph, t: &PairSet, s: &VertexSet) -> bool {
    first_unseparated(g, t, s).is_none()
}

/// Every component of `G \ s` holds at most one vertex of `w \ s`.
pub fn is_multiway_cut(g: &Graph, w: &VertexSet, s: &VertexSet) -> bool {
    let label = g.component_labels(s);
    let mut seen = std::collections::HashSet::new();
    w.iter()
        .filter(|&v| !s.contains(v) && label[v] != usize::MAX)
        .all(|v| seen.insert(label[v]))
}

/// Solution check for a star instance, without the size bound.
pub fn is_star_solution(i: &StarInstance, s: &VertexSet) -> bool {
    s.is_disjoint(&i.w) && is_multicut(&i.g, &i.t, s) && is_multiway_cut(&i.g, &i.w, s)
}
