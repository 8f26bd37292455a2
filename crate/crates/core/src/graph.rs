//! Undirected simple graphs over a fixed id universe `0..n`.
//!
//! Every transformation used by the solver (vertex deletion, contraction of
//! a class into a representative, torso) keeps the id space intact and only
//! shrinks the set of *present* vertices. A cutset found deep inside the
//! reduction chain is therefore already expressed in the ids of the input
//! graph, and lifting a solution is the identity map plus whatever vertices
//! were deleted along the way.

use std::cmp::Ordering;
use std::fmt;

/// A subset of `0..universe`, stored as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::new(universe);
        for v in items {
            s.insert(v);
        }
        s
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        Self::from_iter(universe, [v])
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} out of range {}",
            self.universe
        );
        let (w, b) = (v / 64, v % 64);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        had
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    #[inline]
    fn check(&self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe, "mixed vertex universes");
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn with(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn without(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.check(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }

    /// Order by size first, then lexicographically on the sorted members.
    pub fn cmp_size_lex(&self, other: &VertexSet) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the sorted member lists.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// An unordered terminal pair. Stored as given; `(s, s)` is representable.
pub type Pair = (usize, usize);

/// The terminal pairs of an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairSet {
    pairs: Vec<Pair>,
}

impl PairSet {
    pub fn new() -> Self {
        PairSet { pairs: Vec::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = Pair>>(pairs: I) -> Self {
        let mut p = PairSet::new();
        for (a, b) in pairs {
            p.push(a, b);
        }
        p
    }

    /// Appends a pair in canonical `(min, max)` orientation, skipping duplicates.
    pub fn push(&mut self, a: usize, b: usize) {
        let pair = (a.min(b), a.max(b));
        if !self.pairs.contains(&pair) {
            self.pairs.push(pair);
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pair> + '_ {
        self.pairs.iter().copied()
    }

    pub fn as_slice(&self) -> &[Pair] {
        &self.pairs
    }

    /// Drops every pair with an endpoint in `removed`.
    pub fn without_vertices(&self, removed: &VertexSet) -> PairSet {
        PairSet {
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|&(a, b)| !removed.contains(a) && !removed.contains(b))
                .collect(),
        }
    }

    /// Rewrites every endpoint through `map`, re-canonicalising and deduplicating.
    pub fn map_vertices(&self, map: impl Fn(usize) -> usize) -> PairSet {
        PairSet::from_pairs(self.pairs.iter().map(|&(a, b)| (map(a), map(b))))
    }
}

/// Simple undirected graph on a subset of the ids `0..n`.
///
/// Vertices outside `present` carry no edges. All operations treat them as
/// nonexistent.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    present: VertexSet,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("present", &self.present)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Edgeless graph with all `n` vertices present.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            present: VertexSet::full(n),
            adj: vec![VertexSet::new(n); n],
        }
    }

    /// Builds a graph, silently ignoring self-loops and repeated edges.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Returns false for self-loops and edges already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        if u == v || self.adj[u].contains(v) {
            return false;
        }
        debug_assert!(self.present.contains(u) && self.present.contains(v));
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        true
    }

    /// Size of the id universe (not the number of present vertices).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.present
    }

    pub fn vertex_count(&self) -> usize {
        self.present.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.present.iter().flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, items: I) -> VertexSet {
        VertexSet::from_iter(self.n, items)
    }

    /// Open neighbourhood `N(s)`: vertices outside `s` adjacent to some member.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for v in s {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(s);
        out
    }

    /// Vertices reachable from `from` without entering `blocked`.
    /// Seeds inside `blocked` are ignored.
    pub fn reach(&self, from: &VertexSet, blocked: &VertexSet) -> VertexSet {
        let mut allowed = self.present.difference(blocked);
        let mut seen = from.intersection(&allowed);
        allowed.difference_with(&seen);
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = self.empty_set();
            for v in &frontier {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(&allowed);
            allowed.difference_with(&next);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    /// True iff some path avoiding `blocked` joins `a` and `b`.
    pub fn connected(&self, a: usize, b: usize, blocked: &VertexSet) -> bool {
        if blocked.contains(a) || blocked.contains(b) || !self.contains(a) || !self.contains(b) {
            return false;
        }
        a == b
            || self
                .reach(&VertexSet::singleton(self.n, a), blocked)
                .contains(b)
    }

    /// Connected components of the graph minus `removed`, ordered by minimum id.
    pub fn components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let mut left = self.present.difference(removed);
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.reach(&VertexSet::singleton(self.n, v), removed);
            left.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Component ids for every vertex of `G \ removed`; `usize::MAX` elsewhere.
    pub fn component_labels(&self, removed: &VertexSet) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        for (i, c) in self.components(removed).iter().enumerate() {
            for v in c {
                label[v] = i;
            }
        }
        label
    }

    /// Induced subgraph on `keep` (intersected with the present vertices).
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let present = self.present.intersection(keep);
        let adj = (0..self.n)
            .map(|v| {
                if present.contains(v) {
                    self.adj[v].intersection(&present)
                } else {
                    VertexSet::new(self.n)
                }
            })
            .collect();
        Graph {
            n: self.n,
            present,
            adj,
        }
    }

    /// The graph with the vertices of `removed` deleted.
    pub fn remove_vertices(&self, removed: &VertexSet) -> Graph {
        self.induced(&self.present.difference(removed))
    }

    pub fn remove_vertex(&self, v: usize) -> Graph {
        self.remove_vertices(&VertexSet::singleton(self.n, v))
    }

    /// Adds every missing edge inside `clique`.
    pub fn with_clique(&self, clique: &VertexSet) -> Graph {
        let mut g = self.clone();
        for u in clique {
            let mut others = clique.without(u);
            others.intersect_with(&g.present);
            g.adj[u].union_with(&others);
        }
        g
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| s.without(u).is_subset(&self.adj[u]))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| self.adj[u].is_disjoint(s))
    }

    /// `torso(G, C)`: the graph on `C` where `a, b ∈ C` are adjacent iff they
    /// are adjacent in `G` or joined by a path whose interior avoids `C`.
    ///
    /// One reachability pass per component of `G \ C`: the boundary of each
    /// such component becomes a clique.
    pub fn torso(&self, c: &VertexSet) -> Graph {
        let c = c.intersection(&self.present);
        let mut g = self.induced(&c);
        let outside = self.present.difference(&c);
        let mut left = outside.clone();
        while let Some(v) = left.first() {
            let comp = self.reach(&VertexSet::singleton(self.n, v), &c);
            left.difference_with(&comp);
            let boundary = self.open_neighborhood(&comp);
            for u in &boundary {
                g.adj[u].union_with(&boundary.without(u));
            }
        }
        g
    }

    /// Merges each class `{w} ∪ f⁻¹(w)` into the vertex `w`.
    ///
    /// `assignment` lists `(b, w)` pairs; each `b` disappears and its edges are
    /// transferred to `w`. Loops and duplicate edges vanish. Ids of every other
    /// vertex are unchanged.
    pub fn contract(&self, assignment: &[(usize, usize)]) -> Graph {
        let mut rep: Vec<usize> = (0..self.n).collect();
        let mut gone = self.empty_set();
        for &(b, w) in assignment {
            assert!(
                !gone.contains(w),
                "contraction target {w} is itself contracted"
            );
            rep[b] = w;
            gone.insert(b);
        }
        let present = self.present.difference(&gone);
        let mut adj = vec![VertexSet::new(self.n); self.n];
        for (u, v) in self.edges() {
            let (a, b) = (rep[u], rep[v]);
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        Graph {
            n: self.n,
            present,
            adj,
        }
    }
}

/// `N(s)` in `g`.
pub fn open_neighborhood(g: &Graph, s: &VertexSet) -> VertexSet {
    g.open_neighborhood(s)
}

/// Components of `g \ removed`, deterministic order by minimum id.
pub fn components(g: &Graph, removed: &VertexSet) -> Vec<VertexSet> {
    g.components(removed)
}

pub fn torso(g: &Graph, c: &VertexSet) -> Graph {
    g.torso(c)
}

/// Contraction by a leg assignment `f : b → w`, rewriting terminals of `b`
/// to their images. Returns `(G_f, T_f)`.
pub fn contract_by_assignment(
    g: &Graph,
    t: &PairSet,
    w: &VertexSet,
    f: &[(usize, usize)],
) -> (Graph, PairSet) {
    debug_assert!(f.iter().all(|&(b, fw)| !w.contains(b) && w.contains(fw)));
    let mut map: Vec<usize> = (0..g.universe()).collect();
    for &(b, fw) in f {
        map[b] = fw;
    }
    (g.contract(f), t.map_vertices(|v| map[v]))
}

/// Vertices outside `s ∪ w` that cannot reach `w` once `s` is removed.
pub fn shadow(g: &Graph, w: &VertexSet, s: &VertexSet) -> VertexSet {
    let lit = g.reach(w, s);
    let mut out = g.vertices().difference(&lit);
    out.difference_with(s);
    out.difference_with(w);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, items.iter().copied())
    }

    #[test]
    fn bitset_basics() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert_eq!(s.to_vec(), vec![0, 129]);
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert_eq!(s.first(), Some(129));
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    #[test]
    fn size_lex_order() {
        let a = set(5, &[3]);
        let b = set(5, &[0, 1]);
        let c = set(5, &[0, 2]);
        assert_eq!(a.cmp_size_lex(&b), Ordering::Less);
        assert_eq!(b.cmp_size_lex(&c), Ordering::Less);
        assert!(b < a);
    }

    #[test]
    fn neighborhood_examples() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(path.open_neighborhood(&set(3, &[1])), set(3, &[0, 2]));
        assert!(path.open_neighborhood(&set(3, &[0, 1, 2])).is_empty());
        assert!(path.open_neighborhood(&set(3, &[])).is_empty());
        // star with centre 0, leaves 1, 2, 3
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.open_neighborhood(&set(4, &[1, 2])), set(4, &[0]));
    }

    #[test]
    fn component_examples() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(
            path.components(&set(3, &[1])),
            vec![set(3, &[0]), set(3, &[2])]
        );
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(tri.components(&set(3, &[])), vec![set(3, &[0, 1, 2])]);
        let two = Graph::from_edges(4, [(2, 3), (0, 1)]);
        assert_eq!(
            two.components(&set(4, &[])),
            vec![set(4, &[0, 1]), set(4, &[2, 3])]
        );
    }

    #[test]
    fn torso_examples() {
        // a=0, x=1, b=2
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let t = g.torso(&set(3, &[0, 2]));
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(t.vertices(), &set(3, &[0, 2]));
        assert_eq!(g.torso(g.vertices()), g);
        // a=0, x=1, y=2, b=3 with a–x, x–y, y–b, a–b
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let t = g.torso(&set(4, &[0, 3]));
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 3)]);
    }

    #[test]
    fn contraction_examples() {
        // w1=0, u=1, v=2; f(u)=w1
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let t = PairSet::from_pairs([(1, 2)]);
        let w = set(3, &[0]);
        let (gf, tf) = contract_by_assignment(&g, &t, &w, &[(1, 0)]);
        assert_eq!(gf.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(tf.as_slice(), &[(0, 2)]);
        let (same, same_t) = contract_by_assignment(&g, &t, &w, &[]);
        assert_eq!(same, g);
        assert_eq!(same_t, t);
        // w1=0, u=1, u'=2, w2=3
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let (gf, _) =
            contract_by_assignment(&g, &PairSet::new(), &set(4, &[0, 3]), &[(1, 0), (2, 3)]);
        assert!(gf.has_edge(0, 3));
        assert_eq!(gf.vertices(), &set(4, &[0, 3]));
    }

    #[test]
    fn shadow_examples() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(shadow(&g, &set(3, &[0]), &set(3, &[1])), set(3, &[2]));
        assert!(shadow(&g, &set(3, &[0]), &set(3, &[])).is_empty());
        let star = Graph::from_edges(3, [(0, 1), (0, 2)]);
        assert!(shadow(&star, &set(3, &[0]), &set(3, &[1])).is_empty());
    }

    #[test]
    fn removal_and_cliques() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let h = g.remove_vertex(1);
        assert!(!h.contains(1));
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(2, 3)]);
        let k = h.with_clique(&set(4, &[0, 2, 3]));
        assert!(k.is_clique(&set(4, &[0, 2, 3])));
        assert_eq!(k.edge_count(), 3);
        assert!(g.is_independent(&set(4, &[0, 2])));
        assert!(!g.is_independent(&set(4, &[0, 1])));
    }
}
