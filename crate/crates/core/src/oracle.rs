//! Brute-force ground truth and certificate checking.
//!
//! Everything here is deliberately naive: subsets are scanned by size, then
//! lexicographically, and every property is re-derived from reachability.
//! Size limits are enforced up front so a test never grinds silently.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{Graph, PairSet, VertexSet};
use crate::instance::{is_multicut, is_multiway_cut, MulticutInstance, StarInstance};
use crate::separators::is_separator;

/// Upper bound on the number of subsets a brute-force scan may visit.
pub const SUBSET_BUDGET: u128 = 5_000_000;
/// Largest `|V \ W|` accepted by the closest-set enumeration.
pub const CLOSEST_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
}

/// Named boolean checks; `all_pass` is their conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub checks: BTreeMap<String, bool>,
    pub all_pass: bool,
}

impl Certificate {
    pub fn from_checks<I: IntoIterator<Item = (&'static str, bool)>>(checks: I) -> Self {
        let checks: BTreeMap<String, bool> = checks
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let all_pass = checks.values().all(|&v| v);
        Certificate { checks, all_pass }
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.get(name).copied()
    }
}

/// The instance a cutset is checked against.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Multicut(&'a MulticutInstance),
    Star(&'a StarInstance),
}

/// Evaluates every applicable solution condition by direct reachability.
pub fn verify(target: Target<'_>, s: &VertexSet) -> Certificate {
    match target {
        Target::Multicut(i) => Certificate::from_checks([
            ("is_multicut", is_multicut(&i.g, &i.t, s)),
            ("size_within_budget", s.len() <= i.p),
            ("lifted_correctly", s.is_subset(i.g.vertices())),
        ]),
        Target::Star(i) => Certificate::from_checks([
            ("is_multicut", is_multicut(&i.g, &i.t, s)),
            ("w_disjoint", s.is_disjoint(&i.w)),
            ("is_multiway_cut_of_w", is_multiway_cut(&i.g, &i.w, s)),
            ("size_within_budget", s.len() <= i.p),
            ("lifted_correctly", s.is_subset(i.g.vertices())),
        ]),
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn ensure_budget(m: usize, p: usize) -> Result<(), OracleError> {
    let total: u128 = (0..=p.min(m)).map(|k| binom(m, k)).sum();
    if total > SUBSET_BUDGET {
        return Err(OracleError::TooLarge(format!(
            "{total} subsets of {m} candidates up to size {p}"
        )));
    }
    Ok(())
}

/// Calls `f` on every subset of `pool` of size at most `max`, ordered by size
/// and then lexicographically. Stops at the first `Some`.
pub fn scan_subsets<T>(
    universe: usize,
    pool: &[usize],
    max: usize,
    mut f: impl FnMut(&VertexSet) -> Option<T>,
) -> Option<T> {
    for k in 0..=max.min(pool.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let s = VertexSet::from_iter(universe, idx.iter().map(|&i| pool[i]));
            if let Some(out) = f(&s) {
                return Some(out);
            }
            // next combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < pool.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if k == 0 || i == usize::MAX {
                break;
            }
        }
    }
    None
}

/// Extra conditions for [`brute_multicut`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Constraints<'a> {
    /// Vertices the cutset may not use.
    pub avoid: Option<&'a VertexSet>,
    /// The cutset must also be a multiway cut of this set.
    pub multiway_of: Option<&'a VertexSet>,
}

/// Minimum multicut of `(g, t)` of size at most `p` under `c`; the
/// lexicographically least among minimum ones.
pub fn brute_multicut(
    g: &Graph,
    t: &PairSet,
    p: usize,
    c: Constraints<'_>,
) -> Result<Option<VertexSet>, OracleError> {
    let pool: Vec<usize> = match c.avoid {
        Some(a) => g.vertices().difference(a).to_vec(),
        None => g.vertices().to_vec(),
    };
    ensure_budget(pool.len(), p)?;
    Ok(scan_subsets(g.universe(), &pool, p, |s| {
        let ok = is_multicut(g, t, s) && c.multiway_of.is_none_or(|w| is_multiway_cut(g, w, s));
        ok.then(|| s.clone())
    }))
}

pub fn brute_plain(i: &MulticutInstance) -> Result<Option<VertexSet>, OracleError> {
    brute_multicut(&i.g, &i.t, i.p, Constraints::default())
}

pub fn brute_star(i: &StarInstance) -> Result<Option<VertexSet>, OracleError> {
    brute_multicut(
        &i.g,
        &i.t,
        i.p,
        Constraints {
            avoid: Some(&i.w),
            multiway_of: Some(&i.w),
        },
    )
}

/// Minimum multiway cut of `w` disjoint from `w`, of size at most `p`.
pub fn brute_multiway_cut(
    g: &Graph,
    w: &VertexSet,
    p: usize,
) -> Result<Option<VertexSet>, OracleError> {
    brute_multicut(
        g,
        &PairSet::new(),
        p,
        Constraints {
            avoid: Some(w),
            multiway_of: Some(w),
        },
    )
}

/// A minimum shadowless solution: a solution after whose removal every
/// remaining vertex still reaches `W`.
pub fn has_shadowless_solution(i: &StarInstance) -> Result<Option<VertexSet>, OracleError> {
    let pool = i.free_vertices().to_vec();
    ensure_budget(pool.len(), i.p)?;
    Ok(scan_subsets(i.g.universe(), &pool, i.p, |s| {
        let ok = is_multicut(&i.g, &i.t, s)
            && is_multiway_cut(&i.g, &i.w, s)
            && crate::graph::shadow(&i.g, &i.w, s).is_empty();
        ok.then(|| s.clone())
    }))
}

/// All `W`-closest sets `R` with `|N(R)| ≤ p`, by exhaustive enumeration of
/// the supersets of `W`. Sorted by size, then lexicographically.
pub fn closest_sets(g: &Graph, w: &VertexSet, p: usize) -> Result<Vec<VertexSet>, OracleError> {
    let w = w.intersection(g.vertices());
    let free = g.vertices().difference(&w).to_vec();
    let m = free.len();
    if m > CLOSEST_LIMIT {
        return Err(OracleError::TooLarge(format!("{m} vertices outside W")));
    }
    let size = 1usize << m;
    let build = |mask: usize| {
        let mut r = w.clone();
        for (i, &v) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                r.insert(v);
            }
        }
        r
    };
    let nb: Vec<usize> = (0..size)
        .map(|mask| g.open_neighborhood(&build(mask)).len())
        .collect();
    // best[mask] = min |N| over all submasks of mask, including itself
    let mut best = nb.clone();
    for mask in 1..size {
        for i in 0..m {
            if mask >> i & 1 == 1 {
                best[mask] = best[mask].min(best[mask ^ (1 << i)]);
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0..size {
        if nb[mask] > p {
            continue;
        }
        let proper = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| best[mask ^ (1 << i)])
            .min();
        if proper.is_none_or(|b| b > nb[mask]) {
            out.push(build(mask));
        }
    }
    out.sort_by(|a, b| a.cmp_size_lex(b));
    Ok(out)
}

/// Definition-level check that `r` is `W`-closest, scanning every proper
/// subset between `W` and `r`.
pub fn is_closest(g: &Graph, w: &VertexSet, r: &VertexSet) -> bool {
    if !w.is_subset(r) {
        return false;
    }
    let extra = r.difference(w).to_vec();
    let target = g.open_neighborhood(r).len();
    (0..(1usize << extra.len()) - 1).all(|mask| {
        let mut sub = w.clone();
        for (i, &v) in extra.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sub.insert(v);
            }
        }
        g.open_neighborhood(&sub).len() > target
    })
}

/// The important `X–Y` separators of size at most `p`, straight from the
/// definition: minimal separators with no separator of at most the same size
/// whose source side is a strict superset.
pub fn brute_important(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    p: usize,
) -> Result<Vec<VertexSet>, OracleError> {
    let pool = g.vertices().difference(&x.union(y)).to_vec();
    ensure_budget(pool.len(), p)?;
    let mut seps: Vec<(VertexSet, VertexSet)> = Vec::new();
    scan_subsets::<()>(g.universe(), &pool, p, |s| {
        if is_separator(g, x, y, s) {
            seps.push((s.clone(), g.reach(x, s)));
        }
        None
    });
    let mut out = Vec::new();
    for (s, k) in &seps {
        let minimal = s.iter().all(|v| !is_separator(g, x, y, &s.without(v)));
        if !minimal {
            continue;
        }
        let beaten = seps
            .iter()
            .any(|(s2, k2)| s2.len() <= s.len() && k.is_subset(k2) && k != k2);
        if !beaten {
            out.push(s.clone());
        }
    }
    out.sort_by(|a, b| a.cmp_size_lex(b));
    Ok(out)
}

/// Minimum edge multicut of size at most `p`, by scanning edge subsets.
/// Returns the chosen edges.
pub fn brute_edge_multicut(
    g: &Graph,
    t: &PairSet,
    p: usize,
) -> Result<Option<Vec<(usize, usize)>>, OracleError> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    ensure_budget(edges.len(), p)?;
    let ids: Vec<usize> = (0..edges.len()).collect();
    Ok(scan_subsets(edges.len().max(1), &ids, p, |chosen| {
        let mut h = g.clone();
        let keep: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(*i))
            .map(|(_, &e)| e)
            .collect();
        h = Graph::from_edges(h.universe(), keep).induced(h.vertices());
        let empty = h.empty_set();
        let cut = t.iter().all(|(a, b)| a != b && !h.connected(a, b, &empty));
        cut.then(|| chosen.iter().map(|i| edges[i]).collect())
    }))
}

fn count_nontrivial(g: &Graph, w: &VertexSet) -> usize {
    g.components(w)
        .iter()
        .filter(|c| g.open_neighborhood(c).intersection(w).len() >= 2)
        .count()
}

/// Definition-level shattering check: for every map `f : b → legs`, merging
/// each `b` into `f(b)` must either leave some leg without a separator of
/// size at most `p` from the other legs inside `G_f[(K \ b) ∪ legs]`, or
/// increase the number of components of `G \ W` with two or more legs.
pub fn is_shattering(
    g: &Graph,
    w: &VertexSet,
    p: usize,
    k: &VertexSet,
    legs: &VertexSet,
    b: &VertexSet,
) -> Result<bool, OracleError> {
    let bs = b.to_vec();
    let ls = legs.to_vec();
    let total = (ls.len() as u128).pow(bs.len() as u32);
    if total > 1 << 16 {
        return Err(OracleError::TooLarge(format!("{total} leg assignments")));
    }
    let before = count_nontrivial(g, w);
    let inner = k.difference(b).to_vec();
    ensure_budget(inner.len(), p)?;
    for code in 0..total as usize {
        let mut c = code;
        let f: Vec<(usize, usize)> = bs
            .iter()
            .map(|&v| {
                let leg = ls[c % ls.len()];
                c /= ls.len();
                (v, leg)
            })
            .collect();
        let gf = g.contract(&f);
        if count_nontrivial(&gf, w) > before {
            continue;
        }
        let h = gf.induced(&k.difference(b).union(legs));
        let stuck = legs.iter().any(|x| {
            let xs = VertexSet::singleton(g.universe(), x);
            let rest = legs.without(x);
            scan_subsets(g.universe(), &inner, p, |s| {
                is_separator(&h, &xs, &rest, s).then_some(())
            })
            .is_none()
        });
        if !stuck {
            return Ok(false);
        }
    }
    Ok(true)
}
