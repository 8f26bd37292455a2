//! Minimum vertex separators and important separators.
//!
//! Vertex capacities are realised by splitting each vertex `v` into an
//! in-node and an out-node joined by a unit arc. Members of `X` and `Y` get
//! unbounded internal arcs and are attached to a super-source and super-sink.

use std::cell::Cell;
use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Graph, VertexSet};

thread_local! {
    static FLOW_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of max-flow computations run on the current thread so far.
pub fn flow_calls() -> u64 {
    FLOW_CALLS.with(|c| c.get())
}

/// Runs `f` and returns its result together with the number of flow
/// computations it performed on this thread.
pub fn count_flows<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = flow_calls();
    let out = f();
    (out, flow_calls() - before)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparatorError {
    /// `X` and `Y` intersect or are joined by an edge.
    #[error("no separator exists: source and sink sets touch")]
    NoSeparator,
    /// A separator exists but every one is larger than the cap.
    #[error("minimum separator exceeds the cap of {0}")]
    ExceedsCap(usize),
}

/// An `X–Y` separator together with `K_S`, the union of the components of
/// `G \ S` that meet `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub set: VertexSet,
    pub source_side: VertexSet,
}

impl Separator {
    pub fn new(g: &Graph, x: &VertexSet, set: VertexSet) -> Self {
        let source_side = g.reach(x, &set);
        Separator { set, source_side }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCutResult {
    /// Size of a minimum `X–Y` separator.
    pub lambda: usize,
    /// The minimum separator whose source side contains every other one's.
    pub s_star: Separator,
}

const INF: i32 = i32::MAX / 4;

struct Arc {
    to: usize,
    cap: i32,
}

struct FlowNet {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: i32) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    /// One BFS augmentation. Every augmenting path crosses at least one unit
    /// arc, so each success adds exactly one unit of flow.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.out.len()];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &a in &self.out[u] {
                let v = self.arcs[a].to;
                if !seen[v] && self.arcs[a].cap > 0 {
                    seen[v] = true;
                    prev[v] = a;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let a = prev[v];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            v = self.arcs[a ^ 1].to;
        }
        true
    }

    /// Nodes that can still reach `t` in the residual network.
    fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let mut ok = vec![false; self.out.len()];
        ok[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            // an arc u -> v with residual capacity is the twin of an arc out of v
            for &a in &self.out[v] {
                let u = self.arcs[a].to;
                if !ok[u] && self.arcs[a ^ 1].cap > 0 {
                    ok[u] = true;
                    queue.push_back(u);
                }
            }
        }
        ok
    }
}

fn touches(g: &Graph, x: &VertexSet, y: &VertexSet) -> bool {
    x.intersects(y) || g.open_neighborhood(x).intersects(y)
}

/// Minimum `X–Y` vertex separator of size at most `cap`, together with the
/// extremal minimum separator `S*`.
pub fn min_separator(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    cap: usize,
) -> Result<MinCutResult, SeparatorError> {
    FLOW_CALLS.with(|c| c.set(c.get() + 1));
    let x = x.intersection(g.vertices());
    let y = y.intersection(g.vertices());
    if touches(g, &x, &y) {
        return Err(SeparatorError::NoSeparator);
    }
    let n = g.universe();
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut net = FlowNet::new(2 * n + 2);
    for v in g.vertices() {
        let c = if x.contains(v) || y.contains(v) {
            INF
        } else {
            1
        };
        net.add(2 * v, 2 * v + 1, c);
        for u in g.neighbors(v) {
            net.add(2 * v + 1, 2 * u, INF);
        }
    }
    for v in &x {
        net.add(src, 2 * v, INF);
    }
    for v in &y {
        net.add(2 * v + 1, snk, INF);
    }
    let mut flow = 0;
    while net.augment(src, snk) {
        flow += 1;
        if flow > cap {
            return Err(SeparatorError::ExceedsCap(cap));
        }
    }
    let sink_side = net.reaches_sink(snk);
    let s_star = g.set_of(
        g.vertices()
            .iter()
            .filter(|&v| !sink_side[2 * v] && sink_side[2 * v + 1]),
    );
    debug_assert_eq!(s_star.len(), flow);
    Ok(MinCutResult {
        lambda: flow,
        s_star: Separator::new(g, &x, s_star),
    })
}

/// True iff `s` is disjoint from `X ∪ Y` and no component of `G \ s` meets both.
pub fn is_separator(g: &Graph, x: &VertexSet, y: &VertexSet, s: &VertexSet) -> bool {
    s.is_disjoint(x) && s.is_disjoint(y) && !g.reach(x, s).intersects(y)
}

/// True iff `s` is an important `X–Y` separator: `s` must equal the unique
/// minimum `K_s–Y` separator, which is checked with one flow computation.
pub fn is_important(g: &Graph, x: &VertexSet, y: &VertexSet, s: &VertexSet) -> bool {
    if !is_separator(g, x, y, s) {
        return false;
    }
    let k = g.reach(x, s);
    match min_separator(g, &k, y, s.len()) {
        Ok(cut) => cut.lambda == s.len() && &cut.s_star.set == s,
        Err(_) => false,
    }
}

/// All important `X–Y` separators of size at most `p`, each exactly once,
/// sorted by size then lexicographically.
pub fn enumerate_important(g: &Graph, x: &VertexSet, y: &VertexSet, p: usize) -> Vec<Separator> {
    let x = x.intersection(g.vertices());
    let y = y.intersection(g.vertices());
    let mut candidates = BTreeSet::new();
    branch(g, &x, &y, p, &g.empty_set(), &mut candidates);
    let mut out: Vec<VertexSet> = candidates
        .into_iter()
        .filter(|s| is_important(g, &x, &y, s))
        .collect();
    out.sort_by(|a, b| a.cmp_size_lex(b));
    out.into_iter().map(|s| Separator::new(g, &x, s)).collect()
}

/// Produces a superset of the important separators by branching on the
/// minimum-id vertex of `S*`: either it joins the separator (recurse on
/// `G − v` with budget `p − 1`) or it joins the source side (recurse with
/// `X' = K_{S*} ∪ {v}`, which strictly raises the minimum cut size).
fn branch(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    p: usize,
    taken: &VertexSet,
    out: &mut BTreeSet<VertexSet>,
) {
    let cut = match min_separator(g, x, y, p) {
        Ok(cut) => cut,
        Err(_) => return,
    };
    if cut.lambda == 0 {
        out.insert(taken.clone());
        return;
    }
    let v = cut.s_star.set.first().expect("positive cut has a vertex");
    branch(&g.remove_vertex(v), x, y, p - 1, &taken.with(v), out);
    let mut grown = cut.s_star.source_side.clone();
    grown.insert(v);
    branch(g, &grown, y, p, taken, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, items.iter().copied())
    }

    // a=0, v1=1, v2=2, b=3
    fn path4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)])
    }

    // s=0, u=1, v1=2, v2=3, t=4
    fn diamond_tail() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn min_separator_prefers_the_sink_side() {
        let g = path4();
        let cut = min_separator(&g, &set(4, &[0]), &set(4, &[3]), 2).unwrap();
        assert_eq!(cut.lambda, 1);
        assert_eq!(cut.s_star.set, set(4, &[2]));
        assert_eq!(cut.s_star.source_side, set(4, &[0, 1]));
    }

    #[test]
    fn adjacent_sets_have_no_separator() {
        let g = Graph::from_edges(2, [(0, 1)]);
        assert_eq!(
            min_separator(&g, &set(2, &[0]), &set(2, &[1]), 3),
            Err(SeparatorError::NoSeparator)
        );
        assert!(enumerate_important(&g, &set(2, &[0]), &set(2, &[1]), 3).is_empty());
    }

    #[test]
    fn cap_is_distinguished() {
        let g = diamond_tail();
        // {v1, v2} is the only separator between {s,u} and {t}
        assert_eq!(
            min_separator(&g, &set(5, &[0, 1]), &set(5, &[4]), 1),
            Err(SeparatorError::ExceedsCap(1))
        );
    }

    #[test]
    fn unique_minimum_in_diamond() {
        let g = diamond_tail();
        let cut = min_separator(&g, &set(5, &[0]), &set(5, &[4]), 2).unwrap();
        assert_eq!(cut.lambda, 1);
        assert_eq!(cut.s_star.set, set(5, &[1]));
    }

    #[test]
    fn importance_examples() {
        let g = path4();
        let (x, y) = (set(4, &[0]), set(4, &[3]));
        assert!(!is_important(&g, &x, &y, &set(4, &[1])));
        assert!(is_important(&g, &x, &y, &set(4, &[2])));
        let g = diamond_tail();
        assert!(is_important(
            &g,
            &set(5, &[0]),
            &set(5, &[4]),
            &set(5, &[2, 3])
        ));
        assert!(is_important(
            &g,
            &set(5, &[0]),
            &set(5, &[4]),
            &set(5, &[1])
        ));
        // not minimal
        assert!(!is_important(
            &g,
            &set(5, &[0]),
            &set(5, &[4]),
            &set(5, &[1, 2])
        ));
    }

    #[test]
    fn enumeration_examples() {
        let g = path4();
        let seps = enumerate_important(&g, &set(4, &[0]), &set(4, &[3]), 2);
        assert_eq!(
            seps.iter().map(|s| s.set.clone()).collect::<Vec<_>>(),
            vec![set(4, &[2])]
        );
        let g = diamond_tail();
        let seps = enumerate_important(&g, &set(5, &[0]), &set(5, &[4]), 2);
        assert_eq!(
            seps.iter().map(|s| s.set.clone()).collect::<Vec<_>>(),
            vec![set(5, &[1]), set(5, &[2, 3])]
        );
    }

    #[test]
    fn disconnected_sets_have_the_empty_separator() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let seps = enumerate_important(&g, &set(4, &[0]), &set(4, &[3]), 2);
        assert_eq!(seps.len(), 1);
        assert!(seps[0].set.is_empty());
        assert_eq!(seps[0].source_side, set(4, &[0, 1]));
    }

    #[test]
    fn flow_counter_is_per_call() {
        let g = path4();
        let ((), calls) = count_flows(|| {
            let _ = min_separator(&g, &set(4, &[0]), &set(4, &[3]), 1);
            let _ = min_separator(&g, &set(4, &[0]), &set(4, &[3]), 1);
        });
        assert_eq!(calls, 2);
    }
}
