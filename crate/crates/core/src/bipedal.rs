//! Reduction to instances in which every component of `G \ W` has at most
//! two legs (neighbours in `W`).
//!
//! A component with three or more legs is attacked through a small shattering
//! set `B`: each vertex of `B` is either deleted or merged into one of the
//! legs. Merging either splits the component into more non-trivial pieces or
//! produces an instance that is recognisably infeasible, so the recursion
//! depth is bounded by `2p`.

use std::ops::ControlFlow;

use crate::graph::{Graph, VertexSet};
use crate::instance::{first_unseparated, is_multiway_cut, StarInstance};
use crate::separators::{enumerate_important, min_separator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLegs {
    pub component: VertexSet,
    pub legs: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegProfile {
    /// Components of `G \ W`, ordered by minimum vertex id.
    pub components: Vec<ComponentLegs>,
    /// Number of components with at least two legs.
    pub kappa: usize,
}

pub fn leg_profile(g: &Graph, w: &VertexSet) -> LegProfile {
    let components: Vec<ComponentLegs> = g
        .components(w)
        .into_iter()
        .map(|c| ComponentLegs {
            legs: g.open_neighborhood(&c).intersection(w),
            component: c,
        })
        .collect();
    let kappa = components.iter().filter(|c| c.legs.len() >= 2).count();
    LegProfile { components, kappa }
}

pub fn kappa(g: &Graph, w: &VertexSet) -> usize {
    leg_profile(g, w).kappa
}

/// For every leg `w`, the vertices of `N(m)` reachable from `w` in
/// `G[K ∪ legs] \ m`. Returned in leg order.
pub fn images(
    g: &Graph,
    k: &VertexSet,
    legs: &VertexSet,
    m: &VertexSet,
) -> Vec<(usize, VertexSet)> {
    let h = g.induced(&k.union(legs));
    let boundary = h.open_neighborhood(m);
    legs.iter()
        .map(|w| {
            let seen = h.reach(&VertexSet::singleton(g.universe(), w), m);
            (w, seen.intersection(&boundary))
        })
        .collect()
}

/// A connected multiway cut `m ⊆ K` of the legs, with its boundary and the
/// image of each leg on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCut {
    pub m: VertexSet,
    pub boundary: VertexSet,
    pub images: Vec<(usize, VertexSet)>,
    pub w_star: usize,
}

impl GoodCut {
    pub fn new(g: &Graph, k: &VertexSet, legs: &VertexSet, w_star: usize, m: VertexSet) -> Self {
        let images = images(g, k, legs, &m);
        GoodCut {
            boundary: g.open_neighborhood(&m),
            images,
            m,
            w_star,
        }
    }

    pub fn image_of_star(&self) -> VertexSet {
        self.images
            .iter()
            .find(|(w, _)| *w == self.w_star)
            .unwrap()
            .1
            .clone()
    }

    pub fn image_of_rest(&self) -> VertexSet {
        let mut out = VertexSet::new(self.m.universe());
        for (w, im) in &self.images {
            if *w != self.w_star {
                out.union_with(im);
            }
        }
        out
    }

    /// Checks every defining condition of a good multiway cut directly.
    pub fn is_good(&self, g: &Graph, k: &VertexSet, legs: &VertexSet, p: usize) -> bool {
        let h = g.induced(&k.union(legs));
        let connected = h.induced(&self.m).components(&g.empty_set()).len() == 1;
        let mut covered = g.empty_set();
        let mut disjoint = true;
        for (_, im) in &self.images {
            disjoint &= !covered.intersects(im) && !im.is_empty();
            covered.union_with(im);
        }
        connected
            && self.m.is_subset(k)
            && is_multiway_cut(&h, legs, &self.m)
            && disjoint
            && covered == self.boundary
            && self.image_of_star().difference(legs).len() <= p
            && self.image_of_rest().difference(legs).len() <= p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShatterCase {
    /// The images cannot be separated with at most `p` vertices.
    LargeSeparator,
    /// Removing the boundary and the separator leaves no unique multiway cut.
    NoUniqueCut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    Shattering { b: VertexSet, case: ShatterCase },
    Smaller(GoodCut),
}

/// One refinement step: separate the image of `w*` from the other images
/// inside `G[N(M) ∪ M]`, then either certify a shattering set or descend to a
/// strictly smaller good cut.
pub fn refine_good_cut(
    g: &Graph,
    p: usize,
    k: &VertexSet,
    legs: &VertexSet,
    cut: &GoodCut,
) -> Refinement {
    let h = g.induced(&cut.boundary.union(&cut.m));
    let s = match min_separator(&h, &cut.image_of_star(), &cut.image_of_rest(), p) {
        Ok(res) => res.s_star.set,
        Err(_) => {
            return Refinement::Shattering {
                b: cut.boundary.difference(legs),
                case: ShatterCase::LargeSeparator,
            }
        }
    };
    let removed = cut.boundary.union(&s);
    let hk = g.induced(&k.union(legs));
    let mut cuts = g
        .induced(k)
        .components(&removed)
        .into_iter()
        .filter(|c| is_multiway_cut(&hk, legs, c));
    match (cuts.next(), cuts.next()) {
        (Some(m2), None) => {
            let next = GoodCut::new(g, k, legs, cut.w_star, m2);
            debug_assert!(next.m.is_subset(&cut.m) && next.m != cut.m);
            debug_assert!(next.is_good(g, k, legs, p));
            Refinement::Smaller(next)
        }
        _ => Refinement::Shattering {
            b: removed.difference(legs),
            case: ShatterCase::NoUniqueCut,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatteringSet {
    pub b: VertexSet,
    pub case: ShatterCase,
    pub refinements: usize,
}

/// A shattering set of size at most `3p` for a component with at least three
/// legs, starting from the whole component as the first good cut.
pub fn find_shattering_set(g: &Graph, p: usize, k: &VertexSet, legs: &VertexSet) -> ShatteringSet {
    assert!(
        legs.len() >= 3,
        "shattering sets are defined for components with three or more legs"
    );
    let w_star = legs.first().unwrap();
    let mut cut = GoodCut::new(g, k, legs, w_star, k.clone());
    for refinements in 0..=g.vertex_count() {
        match refine_good_cut(g, p, k, legs, &cut) {
            Refinement::Shattering { b, case } => {
                debug_assert!(b.len() <= 3 * p && b.is_subset(k));
                return ShatteringSet {
                    b,
                    case,
                    refinements,
                };
            }
            Refinement::Smaller(next) => cut = next,
        }
    }
    unreachable!("good cuts shrink strictly")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildKind {
    Deleted(usize),
    /// `(b, leg)` pairs: each `b` is merged into its leg.
    Merged(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub instance: StarInstance,
    pub kind: ChildKind,
}

fn deletion_child(i: &StarInstance, v: usize) -> Child {
    let gone = VertexSet::singleton(i.g.universe(), v);
    Child {
        instance: StarInstance::new_unchecked(
            i.g.remove_vertex(v),
            i.t.without_vertices(&gone),
            i.w.clone(),
            i.p - 1,
        ),
        kind: ChildKind::Deleted(v),
    }
}

fn merge_child(i: &StarInstance, f: Vec<(usize, usize)>) -> Child {
    let (g, t) = crate::graph::contract_by_assignment(&i.g, &i.t, &i.w, &f);
    Child {
        instance: StarInstance::new_unchecked(g, t, i.w.clone(), i.p),
        kind: ChildKind::Merged(f),
    }
}

/// All `|B|` deletion children followed by all `|legs|^|B|` merge children.
pub fn branch_nontrivial(i: &StarInstance, legs: &VertexSet, b: &VertexSet) -> Vec<Child> {
    assert!(i.p >= 1 || b.is_empty(), "deletion children need budget");
    let mut out: Vec<Child> = b.iter().map(|v| deletion_child(i, v)).collect();
    let bs = b.to_vec();
    let ls = legs.to_vec();
    let total = ls.len().pow(bs.len() as u32);
    for code in 0..total {
        let mut c = code;
        let f = bs
            .iter()
            .map(|&v| {
                let leg = ls[c % ls.len()];
                c /= ls.len();
                (v, leg)
            })
            .collect();
        out.push(merge_child(i, f));
    }
    out
}

/// Merge assignments that keep `W` independent: every component of `G[B]`
/// goes to one leg, and that leg must be the only one it touches.
fn viable_assignments(g: &Graph, legs: &VertexSet, b: &VertexSet) -> Vec<Vec<(usize, usize)>> {
    let groups = g.induced(b).components(&g.empty_set());
    let mut options: Vec<Vec<usize>> = Vec::new();
    for grp in &groups {
        let touched = g.open_neighborhood(grp).intersection(legs);
        options.push(match touched.len() {
            0 => legs.to_vec(),
            1 => touched.to_vec(),
            _ => return Vec::new(),
        });
    }
    let mut out = vec![Vec::new()];
    for (grp, opts) in groups.iter().zip(&options) {
        let mut next = Vec::new();
        for partial in &out {
            for &leg in opts {
                let mut f: Vec<(usize, usize)> = partial.clone();
                f.extend(grp.iter().map(|v| (v, leg)));
                next.push(f);
            }
        }
        out = next;
    }
    for f in &mut out {
        f.sort_unstable();
    }
    out
}

/// Minimum multiway cut of `w` avoiding `w`, if one of size at most `p`
/// exists. Branches on important separators around the first vertex of `W`
/// that still reaches another one.
pub fn multiway_cut_solve(g: &Graph, w: &VertexSet, p: usize) -> Option<VertexSet> {
    fn search(g: &Graph, w: &VertexSet, k: usize) -> Option<VertexSet> {
        if !g.is_independent(w) {
            return None;
        }
        let none = g.empty_set();
        let u = w.iter().find(|&u| {
            let rest = w.without(u);
            g.reach(&VertexSet::singleton(g.universe(), u), &none)
                .intersects(&rest)
        });
        let u = match u {
            None => return Some(none),
            Some(u) => u,
        };
        if k == 0 {
            return None;
        }
        let x = VertexSet::singleton(g.universe(), u);
        for sep in enumerate_important(g, &x, &w.without(u), k) {
            if let Some(rest) = search(&g.remove_vertices(&sep.set), w, k - sep.set.len()) {
                return Some(rest.union(&sep.set));
            }
        }
        None
    }
    (0..=p).find_map(|k| search(g, w, k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoReason {
    /// A pair `(w, w)` with `w ∈ W` can never be separated.
    PairInsideW(usize),
    BudgetExhausted,
    /// This vertex of `W` cannot be cut off from the rest with `p` vertices.
    NoSmallSeparator(usize),
    TooManyNontrivial(usize),
    NoMultiwayCut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseAnswer {
    Solved(VertexSet),
    No(NoReason),
}

/// The terminating cases, checked in order; `None` means recurse.
pub fn base_case(i: &StarInstance) -> Option<BaseAnswer> {
    if let Some((a, _)) = i.t.iter().find(|&(a, b)| a == b && i.w.contains(a)) {
        return Some(BaseAnswer::No(NoReason::PairInsideW(a)));
    }
    let unseparated = first_unseparated(&i.g, &i.t, &i.g.empty_set()).is_some();
    if !unseparated {
        return Some(match multiway_cut_solve(&i.g, &i.w, i.p) {
            Some(s) => BaseAnswer::Solved(s),
            None => BaseAnswer::No(NoReason::NoMultiwayCut),
        });
    }
    if i.p == 0 {
        return Some(BaseAnswer::No(NoReason::BudgetExhausted));
    }
    for x in &i.w {
        let rest = i.w.without(x);
        if !rest.is_empty()
            && min_separator(&i.g, &VertexSet::singleton(i.g.universe(), x), &rest, i.p).is_err()
        {
            return Some(BaseAnswer::No(NoReason::NoSmallSeparator(x)));
        }
    }
    let k = kappa(&i.g, &i.w);
    if k > i.p {
        return Some(BaseAnswer::No(NoReason::TooManyNontrivial(k)));
    }
    None
}

/// A bipedal instance produced by the reduction. A solution `S` of
/// `instance` lifts to `S ∪ deleted` for the input instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub instance: StarInstance,
    pub deleted: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatterRecord {
    pub g: Graph,
    pub w: VertexSet,
    pub p: usize,
    pub component: VertexSet,
    pub legs: VertexSet,
    pub b: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// A base-case solution, already lifted to the input instance.
    Solved(VertexSet),
    No(NoReason),
    Leaf(Leaf),
    Shattering(ShatterRecord),
}

/// True iff merging `b` into legs by `f` either hits an unseparable leg in
/// `G_f[K' ∪ legs]` or raises the number of non-trivial components.
fn merge_is_productive(
    parent: &StarInstance,
    parent_kappa: usize,
    k: &VertexSet,
    legs: &VertexSet,
    child: &StarInstance,
) -> bool {
    if kappa(&child.g, &child.w) > parent_kappa {
        return true;
    }
    let h = child.g.induced(&k.union(legs));
    legs.iter().any(|x| {
        min_separator(
            &h,
            &VertexSet::singleton(h.universe(), x),
            &legs.without(x),
            parent.p,
        )
        .is_err()
    })
}

fn visit_node(
    i: &StarInstance,
    deleted: &VertexSet,
    visit: &mut dyn FnMut(Event) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if let Some(ans) = base_case(i) {
        return visit(match ans {
            BaseAnswer::Solved(s) => Event::Solved(s.union(deleted)),
            BaseAnswer::No(r) => Event::No(r),
        });
    }
    let profile = leg_profile(&i.g, &i.w);
    let Some(target) = profile.components.iter().find(|c| c.legs.len() > 2) else {
        return visit(Event::Leaf(Leaf {
            instance: i.clone(),
            deleted: deleted.clone(),
        }));
    };
    let (k, legs) = (&target.component, &target.legs);
    let shatter = find_shattering_set(&i.g, i.p, k, legs);
    visit(Event::Shattering(ShatterRecord {
        g: i.g.clone(),
        w: i.w.clone(),
        p: i.p,
        component: k.clone(),
        legs: legs.clone(),
        b: shatter.b.clone(),
    }))?;
    for v in shatter.b.iter() {
        let child = deletion_child(i, v);
        visit_node(&child.instance, &deleted.with(v), visit)?;
    }
    for f in viable_assignments(&i.g, legs, &shatter.b) {
        let child = merge_child(i, f);
        assert!(
            merge_is_productive(i, profile.kappa, k, legs, &child.instance),
            "shattering set {:?} failed for merge {:?}",
            shatter.b,
            child.kind
        );
        visit_node(&child.instance, deleted, visit)?;
    }
    ControlFlow::Continue(())
}

/// Depth-first traversal of the reduction tree in a fixed order. The visitor
/// may stop the traversal early.
pub fn bipedal_visit(
    i: &StarInstance,
    visit: &mut dyn FnMut(Event) -> ControlFlow<()>,
) -> ControlFlow<()> {
    visit_node(i, &i.g.empty_set(), visit)
}

/// Everything the full traversal produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipedalTree {
    pub solved: Vec<VertexSet>,
    pub no: Vec<NoReason>,
    pub leaves: Vec<Leaf>,
    pub shattering: Vec<ShatterRecord>,
}

pub fn bipedal_tree(i: &StarInstance) -> BipedalTree {
    let mut tree = BipedalTree::default();
    let _ = bipedal_visit(i, &mut |e| {
        match e {
            Event::Solved(s) => tree.solved.push(s),
            Event::No(r) => tree.no.push(r),
            Event::Leaf(l) => tree.leaves.push(l),
            Event::Shattering(s) => tree.shattering.push(s),
        }
        ControlFlow::Continue(())
    });
    tree
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BipedalOutcome {
    Solved(VertexSet),
    No,
    Leaves(Vec<Leaf>),
}

/// A base-case solution if the tree has one, otherwise the bipedal leaves,
/// otherwise No.
pub fn bipedal_reduce(i: &StarInstance) -> BipedalOutcome {
    let tree = bipedal_tree(i);
    if let Some(s) = tree.solved.into_iter().next() {
        BipedalOutcome::Solved(s)
    } else if tree.leaves.is_empty() {
        BipedalOutcome::No
    } else {
        BipedalOutcome::Leaves(tree.leaves)
    }
}
