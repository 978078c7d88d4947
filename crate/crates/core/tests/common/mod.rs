//! Graph builders and independent oracles shared by the integration tests.
#![allow(dead_code)]

use pathrank::WeightedDigraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn graph(vs: &[&str], es: &[(&str, &str, f64)]) -> WeightedDigraph {
    WeightedDigraph::from_named(vs, es).unwrap()
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Complete graph on two vertices with self-loops, all weights 1.
pub fn k2() -> WeightedDigraph {
    graph(
        &["1", "2"],
        &[("1", "1", 1.0), ("1", "2", 1.0), ("2", "1", 1.0), ("2", "2", 1.0)],
    )
}

/// v1 -> a (1), a -> a (2), a -> v2 (1).
pub fn single_dwell() -> WeightedDigraph {
    graph(
        &["v1", "a", "v2"],
        &[("v1", "a", 1.0), ("a", "a", 2.0), ("a", "v2", 1.0)],
    )
}

/// Two self-loops of weight 2 and 3 visited in series.
pub fn serial_cycles() -> WeightedDigraph {
    graph(
        &["v1", "a", "b", "v2"],
        &[
            ("v1", "a", 1.0),
            ("a", "a", 2.0),
            ("a", "b", 1.0),
            ("b", "b", 3.0),
            ("b", "v2", 1.0),
        ],
    )
}

/// Two parallel routes, each through a self-loop of weight 2.
pub fn parallel_routes() -> WeightedDigraph {
    graph(
        &["v1", "a", "b", "v2"],
        &[
            ("v1", "a", 1.0),
            ("a", "a", 2.0),
            ("a", "v2", 1.0),
            ("v1", "b", 1.0),
            ("b", "b", 2.0),
            ("b", "v2", 1.0),
        ],
    )
}

/// Strongly connected graph on `n` vertices that is not a single cycle: a
/// ring plus `extra >= 1` random edges. Weights come from `weight`.
pub fn random_strong(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra: usize,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> WeightedDigraph {
    assert!(extra >= 1);
    let mut edges = Vec::new();
    for i in 0..n {
        let w = weight(rng);
        edges.push((i, (i + 1) % n, w));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let w = weight(rng);
        edges.push((a, b, w));
    }
    WeightedDigraph::new(names(n), edges).unwrap()
}

/// Random digraph with `m` edges on `n` vertices.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, m: usize, lo: f64, hi: f64) -> WeightedDigraph {
    let edges = (0..m)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            (a, b, rng.gen_range(lo..hi))
        })
        .collect();
    WeightedDigraph::new(names(n), edges).unwrap()
}

/// Random digraph whose edges mostly point from lower to higher index, so it
/// tends to have several components; `back` is the chance of a free edge.
pub fn random_mostly_forward(rng: &mut ChaCha8Rng, n: usize, m: usize, back: f64) -> WeightedDigraph {
    let edges = (0..m)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (a, b) = if rng.gen_bool(back) { (a, b) } else { (a.min(b), a.max(b)) };
            (a, b, rng.gen_range(0.5..2.0))
        })
        .collect();
    WeightedDigraph::new(names(n), edges).unwrap()
}

/// Random DAG: edges only go from lower to higher index, some doubled.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, density: f64) -> WeightedDigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(0.5..2.0)));
                if rng.gen_bool(0.15) {
                    edges.push((i, j, rng.gen_range(0.5..2.0)));
                }
            }
        }
    }
    WeightedDigraph::new(names(n), edges).unwrap()
}

/// Number of paths from `from` to `to` in a DAG whose edges go up in index.
pub fn dag_path_count(g: &WeightedDigraph, from: usize, to: usize) -> u64 {
    let n = g.vertex_count();
    let mut ways = vec![0u64; n];
    ways[from] = 1;
    for v in from..n {
        if ways[v] == 0 {
            continue;
        }
        for e in g.edges().iter().filter(|e| e.source == v) {
            ways[e.target] += ways[v];
        }
    }
    if from == to {
        0
    } else {
        ways[to]
    }
}

/// Walks from `from` to `to` with total integer weight at most `t`, counted
/// by dynamic programming over the weight. Weights must be positive integers.
pub fn walk_count_up_to(g: &WeightedDigraph, from: usize, to: usize, t: usize) -> u64 {
    let n = g.vertex_count();
    // ways[w][v]: walks of weight exactly w (at least one edge) ending at v.
    let mut ways = vec![vec![0u64; n]; t + 1];
    for w in 1..=t {
        for e in g.edges() {
            let c = e.weight as usize;
            assert_eq!(c as f64, e.weight);
            if c > w {
                continue;
            }
            let base = if w == c && e.source == from { 1 } else { 0 };
            let prev = if w > c { ways[w - c][e.source] } else { 0 };
            ways[w][e.target] += base + prev;
        }
    }
    (1..=t).map(|w| ways[w][to]).sum()
}

/// Adjacency matrix with parallel edges counted, `a[i][j]` for `i -> j`.
pub fn adjacency_counts(g: &WeightedDigraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.source][e.target] += 1.0;
    }
    a
}

/// Coefficients `c[0..=n]` of `det(xI - A)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += a[i][l] * m[l][j];
                }
                next[i][j] = s + if i == j { c[n - k + 1] } else { 0.0 };
            }
        }
        m = next;
        let mut tr = 0.0;
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * m[l][i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Largest real root of the characteristic polynomial of a non-negative
/// matrix, found by scanning down from a Gershgorin bound and bisecting.
pub fn perron_root(a: &[Vec<f64>]) -> f64 {
    let c = characteristic_polynomial(a);
    let bound = a
        .iter()
        .map(|row| row.iter().sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let steps = 200_000;
    let h = bound / steps as f64;
    let mut hi = bound;
    let mut lo = bound - h;
    while horner(&c, lo) > 0.0 {
        hi = lo;
        lo -= h;
        assert!(lo > -h, "no real root found");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if horner(&c, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares slope of `y` on `x`.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
