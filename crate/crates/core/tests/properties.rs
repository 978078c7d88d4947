mod common;

use pathrank::asymptotics::{classify, cycle_rate, solve_log_rate, AsymptoticClass};
use pathrank::enumeration::{
    compose_sequences, enumerate_paths, union_sequences, Limit, WeightSequence,
};
use pathrank::graph::normalize_simple_with_map;
use pathrank::structure::{collapse, period, scc_decompose, SccDecomposition};
use pathrank::{Path, WeightedDigraph};
use proptest::prelude::*;

use common::walk_count_up_to;

type EdgeList = Vec<(usize, usize, u32)>;

fn build(n: usize, edges: &EdgeList) -> WeightedDigraph {
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let triples = edges
        .iter()
        .map(|&(a, b, w)| (a % n, b % n, w as f64))
        .collect();
    WeightedDigraph::new(names, triples).unwrap()
}

/// Integer-weighted multigraph on up to `max_n` vertices.
fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = WeightedDigraph> {
    (1..=max_n, prop::collection::vec((0..max_n, 0..max_n, 1u32..=4), 1..=max_m))
        .prop_map(|(n, edges)| build(n, &edges))
}

/// Ring through all vertices plus at least one extra edge.
fn arb_strong(max_n: usize) -> impl Strategy<Value = WeightedDigraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0.5f64..2.0, n),
                prop::collection::vec((0..n, 0..n, 0.5f64..2.0), 1..=n + 2),
            )
        })
        .prop_map(|(n, ring, extra)| {
            let mut edges: Vec<(usize, usize, f64)> =
                (0..n).map(|i| (i, (i + 1) % n, ring[i])).collect();
            edges.extend(extra);
            let names = (0..n).map(|i| format!("v{i}")).collect();
            WeightedDigraph::new(names, edges).unwrap()
        })
}

fn weights(g: &WeightedDigraph, v1: usize, v2: usize, limit: Limit) -> Vec<f64> {
    enumerate_paths(g, v1, v2, limit)
        .unwrap()
        .without_paths()
        .map(|r| r.weight)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concatenation_adds_weights(g in arb_graph(4, 10), seed in any::<u64>()) {
        // Walk two random paths that meet, then concatenate.
        let mut state = seed | 1;
        let mut step = |n: usize| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        let e0 = step(g.edge_count());
        let mut edges = vec![e0];
        for _ in 0..step(8) {
            let out = g.out_edges(g.edge(*edges.last().unwrap()).target);
            if out.is_empty() {
                break;
            }
            edges.push(out[step(out.len())]);
        }
        let cut = 1 + step(edges.len());
        if cut < edges.len() {
            let x = Path::new(&g, edges[..cut].to_vec()).unwrap();
            let y = Path::new(&g, edges[cut..].to_vec()).unwrap();
            let xy = x.concat(&y, &g).unwrap();
            prop_assert_eq!(xy.edges(), &edges[..]);
            prop_assert_eq!(xy.weight(&g), x.weight(&g) + y.weight(&g));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_complete(g in arb_graph(4, 8), v1 in 0usize..4, v2 in 0usize..4) {
        let (v1, v2) = (v1 % g.vertex_count(), v2 % g.vertex_count());
        let t = 9usize;
        let w = weights(&g, v1, v2, Limit::weight(t as f64));
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        prop_assert_eq!(w.len() as u64, walk_count_up_to(&g, v1, v2, t));
    }

    #[test]
    fn normalization_preserves_path_weights(g in arb_graph(4, 8), v1 in 0usize..4, v2 in 0usize..4) {
        let (v1, v2) = (v1 % g.vertex_count(), v2 % g.vertex_count());
        let norm = normalize_simple_with_map(&g);
        let h = &norm.graph;
        let mut pairs = std::collections::BTreeSet::new();
        for e in h.edges() {
            prop_assert!(pairs.insert((e.source, e.target)), "parallel edges remain");
        }
        let limit = Limit::weight(8.0);
        prop_assert_eq!(weights(&g, v1, v2, limit), weights(h, v1, v2, limit));
        // The edge map turns each original path into a path of equal weight.
        for r in enumerate_paths(&g, v1, v2, Limit::rank(50)).unwrap() {
            let x = r.path.unwrap();
            let mapped: Vec<usize> = x.edges().iter().flat_map(|&e| norm.edge_map[e].clone()).collect();
            let y = Path::new(h, mapped).unwrap();
            prop_assert_eq!(y.weight(h), r.weight);
        }
    }

    #[test]
    fn normalization_preserves_component_rates(g in arb_graph(4, 8)) {
        let norm = normalize_simple_with_map(&g);
        let (a, b) = (scc_decompose(&g), scc_decompose(&norm.graph));
        for c in 0..a.len() {
            let comp = a.component(c);
            if !comp.nontrivial {
                continue;
            }
            let c2 = b.component_of(comp.vertices[0]);
            prop_assert_eq!(comp.is_cycle, b.component(c2).is_cycle);
            if comp.is_cycle {
                let (w, w2) = (cycle_rate(&g, &a, c).unwrap(), cycle_rate(&norm.graph, &b, c2).unwrap());
                prop_assert!((w / w2 - 1.0).abs() < 1e-12);
            } else {
                let (s, s2) = (solve_log_rate(&g, &a, c).unwrap(), solve_log_rate(&norm.graph, &b, c2).unwrap());
                prop_assert!((s / s2 - 1.0).abs() < 1e-9, "{} vs {}", s, s2);
            }
        }
    }

    #[test]
    fn scaling_scales_the_rate(g in arb_strong(5), t in 0.05f64..20.0) {
        let v2 = g.vertex_count() - 1;
        let (a, b) = (classify(&g, 0, v2).unwrap(), classify(&g.scaled(t).unwrap(), 0, v2).unwrap());
        match (a, b) {
            (AsymptoticClass::Logarithmic { s }, AsymptoticClass::Logarithmic { s: s2 }) => {
                prop_assert!((s2 / (s * t) - 1.0).abs() < 1e-9);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn collapse_is_confluent(g in arb_graph(5, 10), list in prop::collection::vec(0usize..5, 0..16), order in any::<u64>()) {
        let n = g.vertex_count();
        let list: Vec<usize> = list.into_iter().map(|v| v % n).collect();
        let scc = scc_decompose(&g);
        prop_assert_eq!(collapse(&list, &scc), reduce_in_random_order(&list, &scc, order));
    }

    #[test]
    fn period_is_gcd_of_closed_walk_lengths(g in arb_strong(5)) {
        let scc = scc_decompose(&g);
        let p = period(&scc, 0).unwrap();
        let n = g.vertex_count();
        // Boolean walk DP from vertex 0; lengths up to 3n^2 cover the gcd.
        let mut at = vec![false; n];
        at[0] = true;
        let mut gcd = 0u64;
        for len in 1..=(3 * n * n) as u64 {
            let mut next = vec![false; n];
            for e in g.edges() {
                if at[e.source] {
                    next[e.target] = true;
                }
            }
            at = next;
            if at[0] {
                prop_assert_eq!(len % p, 0);
                gcd = num_gcd(gcd, len);
            }
        }
        prop_assert_eq!(gcd, p);
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Applies single collapse steps at pseudo-random positions until none apply.
fn reduce_in_random_order(list: &[usize], scc: &SccDecomposition, mut seed: u64) -> Vec<usize> {
    let mut s = list.to_vec();
    loop {
        let spots: Vec<usize> = (1..s.len().saturating_sub(1))
            .filter(|&i| scc.related(s[i - 1], s[i]) && scc.related(s[i], s[i + 1]))
            .collect();
        if spots.is_empty() {
            return s;
        }
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        s.remove(spots[(seed >> 33) as usize % spots.len()]);
    }
}

/// Integer-weighted block with distinct terminals 0 and n-1 joined by a path.
fn block(edges: &[(usize, usize, f64)], n: usize) -> WeightedDigraph {
    WeightedDigraph::new((0..n).map(|i| format!("v{i}")).collect(), edges.to_vec()).unwrap()
}

fn series_and_parallel(a: &WeightedDigraph, b: &WeightedDigraph) -> (WeightedDigraph, WeightedDigraph) {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    // Vertices: s = 0, block a at 1.., block b after it, t last.
    let t = 1 + na + nb;
    let names: Vec<String> = (0..=t).map(|i| format!("u{i}")).collect();
    let mut inner = Vec::new();
    for e in a.edges() {
        inner.push((1 + e.source, 1 + e.target, e.weight));
    }
    for e in b.edges() {
        inner.push((1 + na + e.source, 1 + na + e.target, e.weight));
    }
    let mut series = inner.clone();
    series.extend([(0, 1, 1.0), (na, 1 + na, 1.0), (na + nb, t, 1.0)]);
    let mut parallel = inner;
    parallel.extend([(0, 1, 1.0), (na, t, 1.0), (0, 1 + na, 1.0), (na + nb, t, 1.0)]);
    (
        WeightedDigraph::new(names.clone(), series).unwrap(),
        WeightedDigraph::new(names, parallel).unwrap(),
    )
}

fn stream(g: &WeightedDigraph, n: u64) -> WeightSequence<'static> {
    let w = weights(g, 0, g.vertex_count() - 1, Limit::rank(n));
    WeightSequence::from_weights(w.into_iter())
}

fn unit() -> WeightSequence<'static> {
    WeightSequence::from_weights(std::iter::once(1.0))
}

#[test]
fn series_and_parallel_blocks_match_compose_and_union() {
    let a = block(&[(0, 1, 1.0), (1, 1, 2.0), (1, 2, 1.0), (2, 0, 3.0)], 3);
    let b = block(&[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 2.0), (1, 1, 1.0)], 2);
    let (series, parallel) = series_and_parallel(&a, &b);
    let n = 10_000u64;
    let t = series.vertex_count() - 1;

    let direct = weights(&series, 0, t, Limit::rank(n));
    let composed = compose_sequences(vec![unit(), stream(&a, n), unit(), stream(&b, n), unit()])
        .unwrap()
        .take_weights(n as usize);
    assert_eq!(direct.len(), n as usize);
    assert_eq!(direct, composed);

    let direct = weights(&parallel, 0, t, Limit::rank(n));
    let arm = |g: &WeightedDigraph| {
        compose_sequences(vec![unit(), stream(g, n), unit()]).unwrap()
    };
    let merged = union_sequences(vec![arm(&a), arm(&b)])
        .unwrap()
        .take_weights(n as usize);
    assert_eq!(direct, merged);
}

#[test]
fn random_blocks_match_compose_and_union() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    while checked < 20 {
        let make = |rng: &mut rand_chacha::ChaCha8Rng| {
            let n = rng.gen_range(2..=4);
            let mut edges: Vec<(usize, usize, f64)> =
                (0..n - 1).map(|i| (i, i + 1, rng.gen_range(1..=3) as f64)).collect();
            for _ in 0..rng.gen_range(0..=4) {
                edges.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=3) as f64));
            }
            block(&edges, n)
        };
        let (a, b) = (make(&mut rng), make(&mut rng));
        let (series, parallel) = series_and_parallel(&a, &b);
        let t = series.vertex_count() - 1;
        let n = 2_000u64;
        let direct = weights(&series, 0, t, Limit::rank(n));
        let composed = compose_sequences(vec![unit(), stream(&a, n), unit(), stream(&b, n), unit()])
            .unwrap()
            .take_weights(direct.len());
        assert_eq!(direct, composed);
        let direct = weights(&parallel, 0, t, Limit::rank(n));
        let arm = |g: &WeightedDigraph| compose_sequences(vec![unit(), stream(g, n), unit()]).unwrap();
        let merged = union_sequences(vec![arm(&a), arm(&b)])
            .unwrap()
            .take_weights(direct.len());
        assert_eq!(direct, merged);
        checked += 1;
    }
}
