mod common;

use common::*;
use multicut::format::{parse_instance, InstanceFile, Kind};
use multicut::graph::{contract_by_assignment, shadow};
use multicut::{Graph, VertexSet};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torso_is_a_simple_undirected_graph_on_c(n in 1usize..=12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        let c = random_subset(&mut r, g.vertices(), 0.6);
        let t = g.torso(&c);
        prop_assert_eq!(t.vertices(), &c);
        for u in &c {
            prop_assert!(!t.has_edge(u, u));
            for v in t.neighbors(u) {
                prop_assert!(c.contains(v));
                prop_assert!(t.has_edge(v, u));
            }
            // edges of G inside C survive
            for v in &g.neighbors(u).intersection(&c) {
                prop_assert!(t.has_edge(u, v));
            }
        }
    }

    #[test]
    fn torso_preserves_separation_inside_c(n in 3usize..=12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        let c = random_subset(&mut r, g.vertices(), 0.6);
        prop_assume!(c.len() >= 2);
        let cv = c.to_vec();
        let a = cv[r.gen_range(0..cv.len())];
        let b = cv[r.gen_range(0..cv.len())];
        prop_assume!(a != b);
        let rest = c.without(a).without(b);
        let s = random_subset(&mut r, &rest, 0.3);
        let t = g.torso(&c);
        prop_assert_eq!(t.connected(a, b, &s), g.connected(a, b, &s));
    }

    #[test]
    fn contraction_matches_the_quotient(n in 2usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        let k = r.gen_range(1..=3);
        let w = random_k_subset(&mut r, g.vertices(), k);
        let rest = g.vertices().difference(&w);
        let b = random_subset(&mut r, &rest, 0.4);
        let wl = w.to_vec();
        let f: Vec<(usize, usize)> = b.iter().map(|v| (v, wl[r.gen_range(0..wl.len())])).collect();
        let t = random_pairs(&mut r, n, 3);
        let (h, th) = contract_by_assignment(&g, &t, &w, &f);
        let mut rep: Vec<usize> = (0..n).collect();
        for &(x, y) in &f {
            rep[x] = y;
        }
        // two classes are adjacent in h iff some members are adjacent in g
        for u in h.vertices() {
            for v in h.vertices() {
                if u >= v {
                    continue;
                }
                let joined = g.edges().any(|(x, y)| {
                    (rep[x] == u && rep[y] == v) || (rep[x] == v && rep[y] == u)
                });
                prop_assert_eq!(h.has_edge(u, v), joined);
            }
        }
        // components of h are the images of components of g
        let none = g.empty_set();
        for x in g.vertices() {
            for y in g.vertices() {
                if g.connected(x, y, &none) {
                    prop_assert!(h.connected(rep[x], rep[y], &h.empty_set()));
                }
            }
        }
        let mut mapped: Vec<(usize, usize)> = t.iter().map(|(a, b)| (rep[a].min(rep[b]), rep[a].max(rep[b]))).collect();
        let mut got: Vec<(usize, usize)> = th.iter().collect();
        mapped.sort_unstable();
        mapped.dedup();
        got.sort_unstable();
        prop_assert_eq!(got, mapped);
    }

    #[test]
    fn shadow_reach_and_cut_partition_the_vertices(n in 1usize..=12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.25);
        let k = r.gen_range(1..=3);
        let w = random_k_subset(&mut r, g.vertices(), k);
        let s = random_subset(&mut r, &g.vertices().difference(&w), 0.3);
        let sh = shadow(&g, &w, &s);
        let reach = g.reach(&w, &s);
        prop_assert!(sh.is_disjoint(&reach));
        prop_assert!(sh.is_disjoint(&s));
        prop_assert!(reach.is_disjoint(&s));
        prop_assert_eq!(&sh.union(&reach).union(&s), g.vertices());
    }

    #[test]
    fn instance_files_round_trip(n in 1usize..=12, k in 0usize..=5, edge in any::<bool>(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        let t = random_pairs(&mut r, n, k);
        let kind = if edge { Kind::Edge } else { Kind::Vertex };
        let f = InstanceFile::new(kind, g, t);
        let text = f.print();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.print(), text);
    }
}

#[test]
fn removal_keeps_ids() {
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
    let h = g.remove_vertices(&set(5, &[2]));
    assert_eq!(h.universe(), 5);
    assert_eq!(h.vertices(), &set(5, &[0, 1, 3, 4]));
    assert!(h.has_edge(3, 4));
    assert_eq!(
        h.components(&VertexSet::new(5)),
        vec![set(5, &[0, 1]), set(5, &[3, 4])]
    );
}
