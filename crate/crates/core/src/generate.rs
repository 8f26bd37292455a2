//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::format::{InstanceFile, Kind};
use crate::graph::{Graph, PairSet};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub edge_prob: f64,
    pub pairs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantedParams {
    pub n: usize,
    /// Size of the hidden cut.
    pub cut: usize,
    pub pairs: usize,
    /// Probability of each extra edge inside a side.
    pub density: f64,
}

/// Up to `count` distinct pairs of distinct vertices drawn by `draw`.
fn sample_pairs(count: usize, limit: usize, mut draw: impl FnMut() -> (usize, usize)) -> PairSet {
    let mut t = PairSet::new();
    let mut tries = 0;
    while t.len() < count && tries < 100 * (count + 1) {
        let (a, b) = draw();
        if a != b {
            t.push(a, b);
        }
        tries += 1;
        if t.len() == limit {
            break;
        }
    }
    t
}

/// Each edge independently with probability `edge_prob`, plus random pairs.
pub fn random_instance(params: RandomParams, kind: Kind, seed: u64) -> InstanceFile {
    let RandomParams {
        n,
        edge_prob,
        pairs,
    } = params;
    let mut rng = stream(seed, &[0x7261_6e64]);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob.clamp(0.0, 1.0)) {
                g.add_edge(u, v);
            }
        }
    }
    let t = if n < 2 {
        PairSet::new()
    } else {
        sample_pairs(pairs, n * (n - 1) / 2, || {
            (rng.gen_range(0..n), rng.gen_range(0..n))
        })
    };
    InstanceFile::new(kind, g, t)
}

/// A graph whose pairs are all separated by a hidden set of `cut` vertices.
/// The other vertices form two to four connected sides; the hidden vertices
/// touch every side, and every pair joins two different sides.
pub fn planted_instance(params: PlantedParams, seed: u64) -> InstanceFile {
    let PlantedParams {
        n,
        cut,
        pairs,
        density,
    } = params;
    assert!(n >= cut + 2, "need at least two vertices outside the cut");
    let mut rng = stream(seed, &[0x706c_616e]);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let (hidden, rest) = ids.split_at(cut);
    let sides_wanted = rng.gen_range(2..=4).min(rest.len());
    let mut sides: Vec<Vec<usize>> = vec![Vec::new(); sides_wanted];
    for (i, &v) in rest.iter().enumerate() {
        let s = if i < sides_wanted {
            i
        } else {
            rng.gen_range(0..sides_wanted)
        };
        sides[s].push(v);
    }

    let mut g = Graph::new(n);
    for side in &sides {
        for i in 1..side.len() {
            let j = rng.gen_range(0..i);
            g.add_edge(side[i], side[j]);
        }
        for i in 0..side.len() {
            for j in i + 1..side.len() {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    g.add_edge(side[i], side[j]);
                }
            }
        }
    }
    for &h in hidden {
        for side in &sides {
            let links = rng.gen_range(1..=side.len().min(3));
            for &v in side.choose_multiple(&mut rng, links) {
                g.add_edge(h, v);
            }
        }
    }
    for i in 0..hidden.len() {
        for j in i + 1..hidden.len() {
            if rng.gen_bool(0.5) {
                g.add_edge(hidden[i], hidden[j]);
            }
        }
    }

    let cross: usize = (0..sides.len())
        .flat_map(|a| (a + 1..sides.len()).map(move |b| (a, b)))
        .map(|(a, b)| sides[a].len() * sides[b].len())
        .sum();
    let t = sample_pairs(pairs, cross, || {
        let a = rng.gen_range(0..sides.len());
        let mut b = rng.gen_range(0..sides.len() - 1);
        if b >= a {
            b += 1;
        }
        (
            *sides[a].choose(&mut rng).unwrap(),
            *sides[b].choose(&mut rng).unwrap(),
        )
    });
    InstanceFile::new(Kind::Vertex, g, t)
}
