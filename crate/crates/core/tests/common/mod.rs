#![allow(dead_code)]

use multicut::{Graph, PairSet, StarInstance, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, prob: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_subset(rng: &mut ChaCha8Rng, pool: &VertexSet, prob: f64) -> VertexSet {
    VertexSet::from_iter(pool.universe(), pool.iter().filter(|_| rng.gen_bool(prob)))
}

/// A uniformly random subset of `pool` of exactly `k` elements (or all of it).
pub fn random_k_subset(rng: &mut ChaCha8Rng, pool: &VertexSet, k: usize) -> VertexSet {
    use rand::seq::SliceRandom;
    let items = pool.to_vec();
    VertexSet::from_iter(
        pool.universe(),
        items.choose_multiple(rng, k.min(items.len())).copied(),
    )
}

pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PairSet {
    PairSet::from_pairs((0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))))
}

pub fn set(n: usize, items: &[usize]) -> VertexSet {
    VertexSet::from_iter(n, items.iter().copied())
}

/// Drops the pairs that `w` does not separate, so `w` becomes a multicut.
pub fn pairs_cut_by(g: &Graph, t: &PairSet, w: &VertexSet) -> PairSet {
    PairSet::from_pairs(
        t.iter()
            .filter(|&(a, b)| w.contains(a) || w.contains(b) || !g.connected(a, b, w)),
    )
}

/// All subsets of `pool`, as bitmask-driven sets.
pub fn all_subsets(pool: &VertexSet) -> Vec<VertexSet> {
    let items = pool.to_vec();
    (0u32..1 << items.len())
        .map(|mask| {
            VertexSet::from_iter(
                pool.universe(),
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            )
        })
        .collect()
}

/// A random star instance: `W` is an independent set of `1..=wmax`
/// vertices and only the pairs `W` separates are kept.
pub fn random_star(
    rng: &mut ChaCha8Rng,
    n: usize,
    prob: f64,
    wmax: usize,
    pairs: usize,
    p: usize,
) -> StarInstance {
    let k = rng.gen_range(1..=wmax.min(n));
    let w = random_k_subset(rng, &VertexSet::full(n), k);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) && !(w.contains(u) && w.contains(v)) {
                g.add_edge(u, v);
            }
        }
    }
    let t = random_pairs(rng, n, pairs);
    let t = pairs_cut_by(&g, &t, &w);
    StarInstance::new(g, t, w, p).unwrap()
}
