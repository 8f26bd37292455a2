//! 2-CNF encoding of instances in which every component of `G \ W` touches
//! at most two vertices of `W`.
//!
//! Each free vertex `v` gets a variable; value `b` means "`v` stays with leg
//! `ℓ_b` of its component". A set of variables whose deletion makes the
//! formula satisfiable decodes to a valid cutset.

use crate::graph::{Graph, VertexSet};
use crate::instance::StarInstance;
use crate::twosat::{Clause, Lit, TwoCnf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("component containing vertex {0} has {1} legs")]
    NotBipedal(usize, usize),
    #[error("W vertices {0} and {1} are adjacent")]
    WNotIndependent(usize, usize),
    #[error("component containing vertex {0} has no legs")]
    Legless(usize),
    #[error("pair ({0}, {0}) lies inside W and can never be separated")]
    PairInsideW(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegLabel {
    pub component: VertexSet,
    pub l0: usize,
    pub l1: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub formula: TwoCnf,
    /// Variables are the free vertices in increasing id order.
    pub vertex_of_var: Vec<usize>,
    pub var_of_vertex: Vec<Option<usize>>,
    pub leg_labels: Vec<LegLabel>,
    universe: usize,
}

impl Encoding {
    /// Leg label of vertex `v` for value `b`.
    fn leg(&self, comp_of: &[usize], v: usize, b: bool) -> Option<usize> {
        let lab = &self.leg_labels[comp_of[v]];
        if b {
            lab.l1
        } else {
            Some(lab.l0)
        }
    }
}

/// Drops components of `G \ W` with no legs. They cannot contain a pair
/// (that pair would survive `W`) and no path through them reaches `W`, so
/// solutions are unaffected.
pub fn strip_legless(i: &StarInstance) -> StarInstance {
    let mut gone = i.g.empty_set();
    for c in i.g.components(&i.w) {
        if !i.g.open_neighborhood(&c).intersects(&i.w) {
            gone.union_with(&c);
        }
    }
    if gone.is_empty() {
        return i.clone();
    }
    StarInstance::new_unchecked(
        i.g.remove_vertices(&gone),
        i.t.without_vertices(&gone),
        i.w.clone(),
        i.p,
    )
}

fn value_lit(var: usize, b: bool) -> Lit {
    Lit { var, positive: b }
}

pub fn encode(i: &StarInstance) -> Result<Encoding, EncodeError> {
    let g: &Graph = &i.g;
    for u in &i.w {
        if let Some(v) = g.neighbors(u).intersection(&i.w).first() {
            return Err(EncodeError::WNotIndependent(u.min(v), u.max(v)));
        }
    }
    let n = g.universe();
    let vertex_of_var = i.free_vertices().to_vec();
    let mut var_of_vertex = vec![None; n];
    for (x, &v) in vertex_of_var.iter().enumerate() {
        var_of_vertex[v] = Some(x);
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut leg_labels = Vec::new();
    for (ci, c) in g.components(&i.w).into_iter().enumerate() {
        let legs = g.open_neighborhood(&c).intersection(&i.w).to_vec();
        let first = c.first().unwrap();
        let (l0, l1) = match legs.as_slice() {
            [] => return Err(EncodeError::Legless(first)),
            [a] => (*a, None),
            [a, b] => (*a, Some(*b)),
            more => return Err(EncodeError::NotBipedal(first, more.len())),
        };
        for v in &c {
            comp_of[v] = ci;
        }
        leg_labels.push(LegLabel {
            component: c,
            l0,
            l1,
        });
    }

    let mut enc = Encoding {
        formula: TwoCnf::new(vertex_of_var.len()),
        vertex_of_var,
        var_of_vertex,
        leg_labels,
        universe: n,
    };
    let var = |v: usize| enc.var_of_vertex[v].unwrap();
    let mut clauses = Vec::new();

    // equal values along edges
    for (u, v) in g.edges() {
        if !i.w.contains(u) && !i.w.contains(v) {
            clauses.push(Clause::implies(Lit::pos(var(u)), Lit::pos(var(v))));
            clauses.push(Clause::implies(Lit::pos(var(v)), Lit::pos(var(u))));
        }
    }
    // neighbours of a leg side with it
    for &u in &enc.vertex_of_var {
        for b in [false, true] {
            if let Some(l) = enc.leg(&comp_of, u, b) {
                if g.has_edge(u, l) {
                    clauses.push(Clause::unit(value_lit(var(u), b)));
                }
            }
        }
    }
    for (u, v) in i.t.iter() {
        match (i.w.contains(u), i.w.contains(v)) {
            (false, false) => {
                // both ends siding with a common leg is forbidden
                for bu in [false, true] {
                    for bv in [false, true] {
                        let (lu, lv) = (enc.leg(&comp_of, u, bu), enc.leg(&comp_of, v, bv));
                        if lu.is_some() && lu == lv {
                            clauses
                                .push(Clause::pair(value_lit(var(u), !bu), value_lit(var(v), !bv)));
                        }
                    }
                }
            }
            (true, false) | (false, true) => {
                let (wv, x) = if i.w.contains(u) { (u, v) } else { (v, u) };
                for b in [false, true] {
                    if enc.leg(&comp_of, x, b) == Some(wv) {
                        clauses.push(Clause::unit(value_lit(var(x), !b)));
                    }
                }
            }
            (true, true) if u == v => return Err(EncodeError::PairInsideW(u)),
            // separated by any multiway cut of W
            (true, true) => {}
        }
    }
    enc.formula.clauses = clauses;
    enc.formula.dedup();
    Ok(enc)
}

/// The vertices of the deleted variables.
pub fn decode(enc: &Encoding, deleted_vars: &[usize]) -> VertexSet {
    VertexSet::from_iter(
        enc.universe,
        deleted_vars.iter().map(|&x| enc.vertex_of_var[x]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PairSet;

    fn set(n: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, items.iter().copied())
    }

    // w1=0, u=1, v=2, w2=3
    fn path() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)])
    }

    #[test]
    fn path_encoding() {
        let i = StarInstance::new(path(), PairSet::new(), set(4, &[0, 3]), 1).unwrap();
        let enc = encode(&i).unwrap();
        let (u, v) = (0, 1);
        assert_eq!(enc.vertex_of_var, vec![1, 2]);
        assert_eq!(enc.leg_labels[0].l0, 0);
        assert_eq!(enc.leg_labels[0].l1, Some(3));
        let want = vec![
            Clause::implies(Lit::pos(u), Lit::pos(v)),
            Clause::implies(Lit::pos(v), Lit::pos(u)),
            Clause::unit(Lit::neg(u)),
            Clause::unit(Lit::pos(v)),
        ];
        assert_eq!(enc.formula.clauses, want);
    }

    #[test]
    fn cross_leg_pair_clause() {
        // component {1} has legs (0, 3), component {2} has legs (3, 4); with
        // u = 2 and v = 1, l0(u) = l1(v) = 3 gives (u ∨ ¬v)
        let g = Graph::from_edges(5, [(0, 1), (1, 3), (3, 2), (2, 4)]);
        let i = StarInstance::new(g, PairSet::from_pairs([(1, 2)]), set(5, &[0, 3, 4]), 1).unwrap();
        let enc = encode(&i).unwrap();
        assert!(enc
            .formula
            .clauses
            .contains(&Clause::pair(Lit::neg(0), Lit::pos(1))));

        // a shared second leg
        let g = Graph::from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3)]);
        let i = StarInstance::new(g, PairSet::from_pairs([(2, 1)]), set(5, &[0, 3, 4]), 1).unwrap();
        let enc = encode(&i).unwrap();
        // vertex 1 is variable 0 with legs (3, 4); vertex 2 is variable 1 with legs (0, 4)
        // common leg 4 = l1(1) = l1(2) gives (¬x0 ∨ ¬x1)
        assert!(enc
            .formula
            .clauses
            .contains(&Clause::pair(Lit::neg(0), Lit::neg(1))));
    }

    #[test]
    fn w_to_free_pair_clause() {
        let i =
            StarInstance::new(path(), PairSet::from_pairs([(0, 2)]), set(4, &[0, 3]), 1).unwrap();
        let enc = encode(&i).unwrap();
        // l0(v) = w1, so v ≠ 0
        assert!(enc.formula.clauses.contains(&Clause::unit(Lit::pos(1))));
    }

    #[test]
    fn errors_and_decode() {
        let g = Graph::from_edges(4, [(0, 3), (0, 1), (1, 2), (2, 3)]);
        let i = StarInstance::new(g, PairSet::new(), set(4, &[0, 3]), 1).unwrap();
        assert_eq!(encode(&i), Err(EncodeError::WNotIndependent(0, 3)));
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let i = StarInstance::new(star, PairSet::new(), set(4, &[1, 2, 3]), 1).unwrap();
        assert_eq!(encode(&i), Err(EncodeError::NotBipedal(0, 3)));
        let lonely = Graph::from_edges(3, [(0, 1)]);
        let i = StarInstance::new(lonely, PairSet::new(), set(3, &[0]), 1).unwrap();
        assert_eq!(encode(&i), Err(EncodeError::Legless(2)));
        assert!(encode(&strip_legless(&i)).is_ok());
        let i =
            StarInstance::new(path(), PairSet::from_pairs([(0, 0)]), set(4, &[0, 3]), 1).unwrap();
        assert_eq!(encode(&i), Err(EncodeError::PairInsideW(0)));

        let i = StarInstance::new(path(), PairSet::new(), set(4, &[0, 3]), 1).unwrap();
        let enc = encode(&i).unwrap();
        assert!(decode(&enc, &[]).is_empty());
        assert_eq!(decode(&enc, &[1]), set(4, &[2]));
    }
}
