//! Random sampling of important separators.
//!
//! The goal is a set `Z ⊆ V \ W` that, for some `W`-closest set `R` with
//! `|N(R)| ≤ p`, avoids `N(R)` and swallows everything beyond it. Three
//! producers are offered: randomized sampling, a splitter-based enumeration
//! that is exhaustive over the random choices, and a brute-force mode that
//! lists every plausible `Z` on small graphs.

use std::collections::HashSet;
use std::ops::Range;

use itertools::{Combinations, Itertools};
use rand::Rng;

use crate::graph::{Graph, VertexSet};
use crate::separators::enumerate_important;

/// Largest `|V \ W|` for which [`exhaustive_sets`] runs.
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Default cap on the combinations [`deterministic_sets`] may enumerate.
pub const DEFAULT_EMISSION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShadowError {
    #[error("enumeration needs {needed} combinations, above the cap of {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("{0} vertices outside W, exhaustive mode handles at most {EXHAUSTIVE_LIMIT}")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub separator: VertexSet,
    /// Vertices `v` for which `separator` is an important `v–W` separator.
    pub witnesses: VertexSet,
}

/// Every important `v–W` separator of size at most `p`, over all `v ∉ W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImportantFamily {
    pub members: Vec<FamilyMember>,
}

impl ImportantFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn separators(&self) -> impl Iterator<Item = &VertexSet> {
        self.members.iter().map(|m| &m.separator)
    }
}

/// Members are sorted by size, then lexicographically. A vertex with no path
/// to `W` contributes the empty separator.
pub fn build_family(g: &Graph, w: &VertexSet, p: usize) -> ImportantFamily {
    let mut members: Vec<FamilyMember> = Vec::new();
    for v in g.vertices().difference(w).iter() {
        let x = VertexSet::singleton(g.universe(), v);
        for sep in enumerate_important(g, &x, w, p) {
            match members.iter_mut().find(|m| m.separator == sep.set) {
                Some(m) => {
                    m.witnesses.insert(v);
                }
                None => members.push(FamilyMember {
                    separator: sep.set,
                    witnesses: x.clone(),
                }),
            }
        }
    }
    members.sort_by(|a, b| a.separator.cmp_size_lex(&b.separator));
    ImportantFamily { members }
}

/// Vertices `v ∉ W ∪ s` for which `s` is an inclusion-minimal `v–W` separator.
pub fn exact_shadow(g: &Graph, w: &VertexSet, s: &VertexSet) -> VertexSet {
    let mut out = g.vertices().difference(&g.reach(w, s));
    out.difference_with(s);
    out.difference_with(w);
    for u in s.iter() {
        if out.is_empty() {
            break;
        }
        out.intersect_with(&g.reach(w, &s.without(u)));
    }
    out
}

/// `N(R) ∩ Z = ∅` and `V \ (R ∪ N(R)) ⊆ Z`: the event a good `Z` must hit.
pub fn success_event(g: &Graph, r: &VertexSet, z: &VertexSet) -> bool {
    let nr = g.open_neighborhood(r);
    let beyond = g.vertices().difference(r).difference(&nr);
    z.is_disjoint(&nr) && beyond.is_subset(z)
}

fn union_of_shadows<'a>(
    g: &Graph,
    w: &VertexSet,
    chosen: impl Iterator<Item = &'a VertexSet>,
) -> VertexSet {
    let mut z = g.empty_set();
    for s in chosen {
        z.union_with(&exact_shadow(g, w, s));
    }
    z
}

/// Keeps each family member with probability 1/2 and returns the union of
/// the exact shadows of the kept ones.
pub fn random_set_simple<R: Rng + ?Sized>(
    g: &Graph,
    w: &VertexSet,
    p: usize,
    rng: &mut R,
) -> VertexSet {
    let family = build_family(g, w, p);
    let chosen: Vec<&VertexSet> = family.separators().filter(|_| rng.gen_bool(0.5)).collect();
    union_of_shadows(g, w, chosen.into_iter())
}

/// Two-phase sampling. Phase 1 keeps members at rate `4^-p` and turns each
/// kept separator into a clique. Phase 2 rebuilds the family on that graph
/// and keeps clique-inducing members at rate `1 - 2^-p`; `Z` is the union of
/// their exact shadows in the cliqued graph.
pub fn random_set<R: Rng + ?Sized>(g: &Graph, w: &VertexSet, p: usize, rng: &mut R) -> VertexSet {
    let rate1 = 0.25f64.powi(p as i32);
    let rate2 = 1.0 - 0.5f64.powi(p as i32);
    let family1 = build_family(g, w, p);
    let mut g2 = g.clone();
    for s in family1.separators() {
        if rng.gen_bool(rate1) {
            g2 = g2.with_clique(s);
        }
    }
    let family2 = build_family(&g2, w, p);
    let chosen: Vec<&VertexSet> = family2
        .separators()
        .filter(|s| g2.is_clique(s))
        .filter(|_| rng.gen_bool(rate2))
        .collect();
    union_of_shadows(&g2, w, chosen.into_iter())
}

/// One member of a splitter family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitFn {
    Constant,
    Identity,
    /// `x ↦ ((a·x) mod prime) mod range`
    Hash {
        a: u64,
        prime: u64,
    },
}

/// Functions `[n] → [r²]` such that every `r`-subset of `[n]` is mapped
/// injectively by at least one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitterFamily {
    pub n: usize,
    pub r: usize,
    pub functions: Vec<SplitFn>,
}

impl SplitterFamily {
    pub fn range(&self) -> usize {
        self.r * self.r
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn apply(&self, f: usize, x: usize) -> usize {
        match self.functions[f] {
            SplitFn::Constant => 0,
            SplitFn::Identity => x,
            SplitFn::Hash { a, prime } => ((a * x as u64 % prime) % self.range() as u64) as usize,
        }
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2
        && (2..)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

fn splitter_len(n: usize, r: usize) -> usize {
    if r <= 1 || r * r >= n {
        1
    } else {
        (n as u64 + 1..).find(|&m| is_prime(m)).unwrap() as usize - 1
    }
}

/// Prime-hash construction. For a pair `x ≠ y` at most `2⌊(P-1)/r²⌋`
/// multipliers collide, so over the `C(r,2)` pairs of an `r`-set fewer than
/// `P - 1` multipliers are spoiled and one is injective.
pub fn build_splitter(n: usize, r: usize) -> SplitterFamily {
    assert!(n >= 1 && r >= 1, "splitter needs n, r >= 1");
    let functions = if r == 1 {
        vec![SplitFn::Constant]
    } else if r * r >= n {
        vec![SplitFn::Identity]
    } else {
        let prime = (n as u64 + 1..).find(|&m| is_prime(m)).unwrap();
        (1..prime).map(|a| SplitFn::Hash { a, prime }).collect()
    };
    SplitterFamily { n, r, functions }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Sizes of the must-select and must-avoid collections in the two phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseSizes {
    pub a1: usize,
    pub b1: usize,
    pub a2: usize,
    pub b2: usize,
}

impl PhaseSizes {
    pub fn for_budget(p: usize) -> Self {
        PhaseSizes {
            a1: p * p.saturating_sub(1) / 2,
            b1: p * 4usize.pow(p as u32),
            a2: 1 << p,
            b2: p * p,
        }
    }
}

struct Phase2 {
    shadows: Vec<VertexSet>,
    splitter: SplitterFamily,
    func: usize,
    subsets: Combinations<Range<usize>>,
}

/// Lazy enumeration of the derandomized candidate sets. Each phase-1
/// selection fixes a cliqued graph; every (splitter function, avoided
/// range subset) pair of phase 2 then yields one `Z`. Duplicates are
/// suppressed.
pub struct DeterministicSets {
    g: Graph,
    w: VertexSet,
    p: usize,
    sizes: PhaseSizes,
    separators: Vec<VertexSet>,
    selections: std::vec::IntoIter<Vec<usize>>,
    phase2: Option<Phase2>,
    seen: HashSet<VertexSet>,
    /// Upper bound on combinations, checked against the cap up front.
    pub planned: u128,
}

impl DeterministicSets {
    fn open_phase2(&mut self, selection: &[usize]) -> Phase2 {
        let mut g2 = self.g.clone();
        for &i in selection {
            g2 = g2.with_clique(&self.separators[i]);
        }
        let family2 = build_family(&g2, &self.w, self.p);
        let shadows: Vec<VertexSet> = family2
            .separators()
            .filter(|s| g2.is_clique(s))
            .map(|s| exact_shadow(&g2, &self.w, s))
            .collect();
        let splitter = build_splitter(shadows.len().max(1), self.sizes.a2 + self.sizes.b2);
        let range = splitter.range();
        Phase2 {
            shadows,
            splitter,
            func: 0,
            subsets: (0..range).combinations(self.sizes.b2),
        }
    }
}

impl Iterator for DeterministicSets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        loop {
            if self.phase2.is_none() {
                let sel = self.selections.next()?;
                let ph = self.open_phase2(&sel);
                self.phase2 = Some(ph);
            }
            let ph = self.phase2.as_mut().unwrap();
            if ph.shadows.is_empty() {
                self.phase2 = None;
                let z = self.g.empty_set();
                if self.seen.insert(z.clone()) {
                    return Some(z);
                }
                continue;
            }
            let avoided = match ph.subsets.next() {
                Some(f) => f,
                None => {
                    ph.func += 1;
                    if ph.func == ph.splitter.len() {
                        self.phase2 = None;
                    } else {
                        ph.subsets = (0..ph.splitter.range()).combinations(self.sizes.b2);
                    }
                    continue;
                }
            };
            let mut z = self.g.empty_set();
            for (i, sh) in ph.shadows.iter().enumerate() {
                if !avoided.contains(&ph.splitter.apply(ph.func, i)) {
                    z.union_with(sh);
                }
            }
            if self.seen.insert(z.clone()) {
                return Some(z);
            }
        }
    }
}

/// Splitter-based replacement for the random choices of [`random_set`].
/// For every `W`-closest `R` with `|N(R)| ≤ p`, some emitted `Z` satisfies
/// [`success_event`]. Fails fast when the planned enumeration exceeds `cap`.
pub fn deterministic_sets(
    g: &Graph,
    w: &VertexSet,
    p: usize,
    cap: u128,
) -> Result<DeterministicSets, ShadowError> {
    let sizes = PhaseSizes::for_budget(p);
    let family1 = build_family(g, w, p);
    let separators: Vec<VertexSet> = family1.separators().cloned().collect();
    let n1 = separators.len().max(1);
    let r1 = sizes.a1 + sizes.b1;
    let phase1 = if sizes.a1 == 0 {
        1
    } else {
        splitter_len(n1, r1) as u128 * binom(r1 * r1, sizes.a1)
    };
    let r2 = sizes.a2 + sizes.b2;
    let n2_bound = (p * g.vertex_count()).max(1);
    let phase2 = splitter_len(n2_bound, r2) as u128 * binom(r2 * r2, sizes.b2);
    let planned = phase1.saturating_mul(phase2);
    if planned > cap {
        return Err(ShadowError::BudgetExceeded {
            needed: planned,
            cap,
        });
    }

    let mut selections: Vec<Vec<usize>> = Vec::new();
    if sizes.a1 == 0 {
        selections.push(Vec::new());
    } else {
        let splitter = build_splitter(n1, r1);
        let mut seen = HashSet::new();
        for f in 0..splitter.len() {
            for marked in (0..splitter.range()).combinations(sizes.a1) {
                let sel: Vec<usize> = (0..separators.len())
                    .filter(|&i| marked.contains(&splitter.apply(f, i)))
                    .collect();
                if seen.insert(sel.clone()) {
                    selections.push(sel);
                }
            }
        }
    }
    Ok(DeterministicSets {
        g: g.clone(),
        w: w.clone(),
        p,
        sizes,
        separators,
        selections: selections.into_iter(),
        phase2: None,
        seen: HashSet::new(),
        planned,
    })
}

/// Every `Z ⊆ V \ W` with `N(Z) ∩ W = ∅` and `|N(Z)| ≤ p`, sorted by size
/// then lexicographically. The shadow of any solution is among them.
pub fn exhaustive_sets(g: &Graph, w: &VertexSet, p: usize) -> Result<Vec<VertexSet>, ShadowError> {
    let free = g.vertices().difference(w).to_vec();
    if free.len() > EXHAUSTIVE_LIMIT {
        return Err(ShadowError::TooLarge(free.len()));
    }
    let mut out = Vec::new();
    for mask in 0usize..1 << free.len() {
        let z = VertexSet::from_iter(
            g.universe(),
            free.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        );
        let nz = g.open_neighborhood(&z);
        if nz.len() <= p && nz.is_disjoint(w) {
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.cmp_size_lex(b));
    Ok(out)
}

/// The distinct shadows `shadow(W, S)` over all `S ⊆ V \ W` with
/// `|S| ≤ p`, sorted by size then lexicographically. Like
/// [`exhaustive_sets`] it contains the shadow of every solution, but its
/// length grows as `|V \ W|^p` rather than `2^|V \ W|`.
pub fn cut_shadow_sets(
    g: &Graph,
    w: &VertexSet,
    p: usize,
    cap: u128,
) -> Result<Vec<VertexSet>, ShadowError> {
    let free = g.vertices().difference(w).to_vec();
    let needed: u128 = (0..=p.min(free.len())).map(|k| binom(free.len(), k)).sum();
    if needed > cap {
        return Err(ShadowError::BudgetExceeded { needed, cap });
    }
    let mut seen = HashSet::new();
    for k in 0..=p.min(free.len()) {
        for cut in free.iter().copied().combinations(k) {
            let cut = VertexSet::from_iter(g.universe(), cut);
            seen.insert(crate::graph::shadow(g, w, &cut));
        }
    }
    let mut out: Vec<VertexSet> = seen.into_iter().collect();
    out.sort_by(|a, b| a.cmp_size_lex(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::closest_sets;
    use crate::rng::stream;

    fn set(n: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, items.iter().copied())
    }

    // w=0, v1=1, v2=2
    fn path3() -> (Graph, VertexSet) {
        (Graph::from_edges(3, [(0, 1), (1, 2)]), set(3, &[0]))
    }

    #[test]
    fn family_examples() {
        let (g, w) = path3();
        let fam = build_family(&g, &w, 1);
        assert_eq!(fam.members.len(), 1);
        assert_eq!(fam.members[0].separator, set(3, &[1]));
        assert_eq!(fam.members[0].witnesses, set(3, &[2]));
        assert!(build_family(&g, g.vertices(), 2).is_empty());
        assert!(build_family(&g, &w, 0).is_empty());
    }

    #[test]
    fn exact_shadow_examples() {
        let (g, w) = path3();
        assert_eq!(exact_shadow(&g, &w, &set(3, &[1])), set(3, &[2]));
        assert!(exact_shadow(&g, &w, &set(3, &[])).is_empty());
        // w=0 joined to a=1 and c=2; path a-3-4-c; 5 hangs off a only.
        // {a, c} is minimal for 3 and 4, but {a} alone already cuts off 5.
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (1, 3), (3, 4), (2, 4), (1, 5)]);
        let w = set(6, &[0]);
        let s = set(6, &[1, 2]);
        assert_eq!(exact_shadow(&g, &w, &s), set(6, &[3, 4]));
        assert_eq!(crate::graph::shadow(&g, &w, &s), set(6, &[3, 4, 5]));
    }

    #[test]
    fn simple_sampling_hits_both_outcomes() {
        let (g, w) = path3();
        let mut hits = 0;
        for seed in 0..2000 {
            let z = random_set_simple(&g, &w, 1, &mut stream(seed, &[]));
            assert!(z.is_empty() || z == set(3, &[2]));
            hits += usize::from(success_event(&g, &w, &z));
        }
        assert!((800..1200).contains(&hits), "{hits}");
    }

    #[test]
    fn two_phase_sampling_succeeds_sometimes() {
        let (g, w) = path3();
        let mut hits = 0;
        for seed in 0..10_000 {
            let z = random_set(&g, &w, 1, &mut stream(seed, &[]));
            assert!(z.is_disjoint(&w));
            hits += usize::from(success_event(&g, &w, &z));
        }
        assert!(hits > 0);
        assert!(random_set(&g, g.vertices(), 1, &mut stream(0, &[])).is_empty());
    }

    #[test]
    fn splitter_examples() {
        assert_eq!(build_splitter(10, 1).len(), 1);
        assert_eq!(build_splitter(9, 3).functions, vec![SplitFn::Identity]);
        let sp = build_splitter(10, 3);
        for x in (0..10).combinations(3) {
            let ok = (0..sp.len()).any(|f| {
                let imgs: HashSet<usize> = x.iter().map(|&v| sp.apply(f, v)).collect();
                imgs.len() == 3
            });
            assert!(ok, "{x:?}");
        }
    }

    #[test]
    fn deterministic_examples() {
        let (g, w) = path3();
        let zs: Vec<VertexSet> = deterministic_sets(&g, &w, 0, DEFAULT_EMISSION_CAP)
            .unwrap()
            .collect();
        assert_eq!(zs, vec![set(3, &[])]);
        let zs: Vec<VertexSet> = deterministic_sets(&g, &w, 1, DEFAULT_EMISSION_CAP)
            .unwrap()
            .collect();
        assert!(zs.contains(&set(3, &[2])));
        for r in closest_sets(&g, &w, 1).unwrap() {
            assert!(zs.iter().any(|z| success_event(&g, &r, z)), "{r:?}");
        }
        assert!(matches!(
            deterministic_sets(&g, &w, 3, DEFAULT_EMISSION_CAP),
            Err(ShadowError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exhaustive_sets_contain_the_shadow() {
        let (g, w) = path3();
        let zs = exhaustive_sets(&g, &w, 1).unwrap();
        assert_eq!(zs, vec![set(3, &[]), set(3, &[2])]);
        assert!(matches!(
            exhaustive_sets(&Graph::new(20), &set(20, &[0]), 1),
            Err(ShadowError::TooLarge(19))
        ));
    }
}
