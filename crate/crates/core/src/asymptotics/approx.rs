//! Uniformly weighted approximations `G(b)`: each edge of weight `w` becomes a
//! chain of `floor(w / b)` edges of weight `b`.

use serde::Serialize;

use super::spectral::{spectral_radius, ComponentMatrix, SparseMatrix};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Path, VertexId, WeightedDigraph};
use crate::structure::SccDecomposition;

pub const DEFAULT_SIZE_GUARD: usize = 20_000;

#[derive(Debug, Clone)]
pub struct ApproximateGraph {
    pub base: f64,
    /// `C_e` for every original edge.
    pub chain_lengths: Vec<u64>,
    /// Expanded graph. Its first `original_vertices` vertices are the
    /// original ones, in order.
    pub graph: WeightedDigraph,
    pub original_vertices: usize,
    /// Expanded edges replacing each original edge, in chain order.
    pub chains: Vec<Vec<EdgeId>>,
}

/// `floor(w / b)`, treating quotients within rounding of an integer as that
/// integer so exact multiples are not lost.
pub fn chain_length(w: f64, b: f64) -> u64 {
    let q = w / b;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as u64
    } else {
        q.floor() as u64
    }
}

fn check_base(g: &WeightedDigraph, b: f64) -> Result<f64> {
    let min_weight = g.min_weight().unwrap_or(f64::INFINITY);
    if !(b > 0.0 && b < min_weight) {
        return Err(Error::InadmissibleBase {
            base: b,
            min_weight,
        });
    }
    Ok(min_weight)
}

/// Expanded vertex count of `G(b)` without building it.
pub fn approximate_size(g: &WeightedDigraph, b: f64) -> Result<usize> {
    check_base(g, b)?;
    Ok(g.vertex_count()
        + g.edges()
            .iter()
            .map(|e| chain_length(e.weight, b) as usize - 1)
            .sum::<usize>())
}

pub fn build_approximate(g: &WeightedDigraph, b: f64) -> Result<ApproximateGraph> {
    build_approximate_guarded(g, b, usize::MAX)
}

pub fn build_approximate_guarded(
    g: &WeightedDigraph,
    b: f64,
    max_vertices: usize,
) -> Result<ApproximateGraph> {
    let size = approximate_size(g, b)?;
    if size > max_vertices {
        return Err(Error::GuardExceeded {
            what: "approximate graph size",
            limit: max_vertices,
        });
    }
    let mut names = g.names().to_vec();
    let mut triples = Vec::new();
    let mut chains = Vec::with_capacity(g.edge_count());
    let mut chain_lengths = Vec::with_capacity(g.edge_count());
    for (id, e) in g.edges().iter().enumerate() {
        let len = chain_length(e.weight, b);
        chain_lengths.push(len);
        let mut chain = Vec::with_capacity(len as usize);
        let mut prev = e.source;
        for k in 1..len {
            let v = names.len();
            names.push(format!("#{id}.{k}"));
            chain.push(triples.len());
            triples.push((prev, v, b));
            prev = v;
        }
        chain.push(triples.len());
        triples.push((prev, e.target, b));
        chains.push(chain);
    }
    Ok(ApproximateGraph {
        base: b,
        chain_lengths,
        graph: WeightedDigraph::new(names, triples)?,
        original_vertices: g.vertex_count(),
        chains,
    })
}

impl ApproximateGraph {
    /// The path of `G(b)` corresponding to a path of the original graph.
    pub fn map_path(&self, x: &Path) -> Path {
        let edges: Vec<EdgeId> = x
            .edges()
            .iter()
            .flat_map(|&e| self.chains[e].iter().copied())
            .collect();
        Path::from_trusted(edges)
    }

    /// `max_e |w_e - C_e b|`.
    pub fn max_rounding(&self, original: &WeightedDigraph) -> f64 {
        original
            .edges()
            .iter()
            .zip(&self.chain_lengths)
            .map(|(e, &c)| (e.weight - c as f64 * self.base).abs())
            .fold(0.0, f64::max)
    }

    /// Bound on `|W(x_b) / W(x) - 1|` over all paths.
    pub fn relative_error_bound(&self, original: &WeightedDigraph) -> f64 {
        self.max_rounding(original) / original.min_weight().unwrap_or(f64::INFINITY)
    }
}

/// Induced subgraph on one component, with the original id of each vertex.
pub fn component_subgraph(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    c: usize,
) -> (WeightedDigraph, Vec<VertexId>) {
    let vertices = scc.component(c).vertices.clone();
    let names = vertices.iter().map(|&v| g.name(v).to_string()).collect();
    let local = |v: VertexId| vertices.binary_search(&v).ok();
    let mut triples = Vec::new();
    for e in g.edges() {
        if let (Some(i), Some(j)) = (local(e.source), local(e.target)) {
            triples.push((i, j, e.weight));
        }
    }
    (
        WeightedDigraph::new(names, triples).expect("subgraph of a valid graph"),
        vertices,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub base: f64,
    /// Spectral radius of the adjacency of `G(b)`.
    pub lambda: f64,
    /// `b / ln λ_b`.
    pub rate: f64,
}

/// For each base, expands the component to `G(b)`, takes the spectral radius
/// `λ_b` of its adjacency and reports `s_b = b / ln λ_b`.
pub fn approx_rate_sweep(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    c: usize,
    bases: &[f64],
    size_guard: usize,
) -> Result<Vec<SweepPoint>> {
    let comp = scc.component(c);
    if !comp.nontrivial {
        return Err(Error::TrivialComponent);
    }
    if comp.is_cycle {
        return Err(Error::CycleComponent);
    }
    let (sub, _) = component_subgraph(g, scc, c);
    let mut out = Vec::with_capacity(bases.len());
    for &b in bases {
        let approx = build_approximate_guarded(&sub, b, size_guard)?;
        let lambda = spectral_radius(&SparseMatrix::adjacency(&approx.graph))?;
        out.push(SweepPoint {
            base: b,
            lambda,
            rate: b / lambda.ln(),
        });
    }
    Ok(out)
}

/// Collapsed matrix of `G(b)` at `λ`: entry `(i, j)` sums `λ^{-C_e}` over the
/// original edges `j -> i`. At `λ = ρ(A(b))` its spectral radius is 1.
pub fn collapsed_matrix(
    sub: &WeightedDigraph,
    approx: &ApproximateGraph,
    lambda: f64,
) -> super::spectral::DenseMatrix {
    let mut m = super::spectral::DenseMatrix::zeros(sub.vertex_count());
    for (e, &len) in sub.edges().iter().zip(&approx.chain_lengths) {
        m.add(e.target, e.source, lambda.powi(-(len as i32)));
    }
    m
}

/// Decay matrix of the component with weights replaced by `C_e b`, whose
/// unit-radius root is the rate of `G(b)`.
pub fn rounded_component(sub: &WeightedDigraph, approx: &ApproximateGraph) -> ComponentMatrix {
    ComponentMatrix {
        vertices: (0..sub.vertex_count()).collect(),
        entries: sub
            .edges()
            .iter()
            .zip(&approx.chain_lengths)
            .map(|(e, &len)| (e.target, e.source, len as f64 * approx.base))
            .collect(),
    }
}
