//! Spectral radius of non-negative matrices and the decay-rate solver.

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedDigraph};
use crate::structure::SccDecomposition;

pub const MAX_ITERATIONS: usize = 1_000_000;
/// Relative width of the Collatz-Wielandt bracket at which iteration stops.
pub const RADIUS_TOLERANCE: f64 = 1e-14;
/// Relative width of the final bisection interval in [`solve_log_rate`].
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// A non-negative linear operator on `R^n`.
pub trait NonNegativeOperator {
    fn dim(&self) -> usize;
    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }
}

impl NonNegativeOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// Sparse non-negative matrix stored as per-row `(column, value)` lists.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![Vec::new(); n],
        }
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i].push((j, v));
    }

    /// Adjacency of a graph with `a_ij` counting edges `j -> i`.
    pub fn adjacency(g: &WeightedDigraph) -> Self {
        let mut m = Self::new(g.vertex_count());
        for e in g.edges() {
            m.push(e.target, e.source, 1.0);
        }
        m
    }
}

impl NonNegativeOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (yi, row) in y.iter_mut().zip(&self.rows) {
            *yi = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }
}

/// Spectral radius of a non-negative matrix.
///
/// Power iteration on `M + I`, which has the same Perron vector as `M` and no
/// other eigenvalue of the same modulus when `M` is irreducible. For a positive
/// iterate `x` the ratios `((M + I) x)_i / x_i` bracket `ρ(M) + 1`
/// (Collatz-Wielandt); iteration stops once the bracket is narrower than
/// [`RADIUS_TOLERANCE`] relative to its upper end.
pub fn spectral_radius<M: NonNegativeOperator + ?Sized>(m: &M) -> Result<f64> {
    spectral_radius_with(m, RADIUS_TOLERANCE, MAX_ITERATIONS)
}

pub fn spectral_radius_with<M: NonNegativeOperator + ?Sized>(
    m: &M,
    tolerance: f64,
    max_iterations: usize,
) -> Result<f64> {
    let n = m.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut best_gap = f64::INFINITY;
    let mut stalled = 0;
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..max_iterations {
        m.apply(&x, &mut y);
        lo = f64::INFINITY;
        hi = 0.0f64;
        let mut top = 0.0f64;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
            let r = *yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(*yi);
        }
        let gap = hi - lo;
        if gap <= tolerance * hi {
            return Ok(0.5 * (lo + hi) - 1.0);
        }
        // Rounding puts a floor under the bracket; accept it once it stops
        // shrinking and is already tight.
        if gap < best_gap {
            best_gap = gap;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 50 && gap <= 64.0 * f64::EPSILON * hi {
                return Ok(0.5 * (lo + hi) - 1.0);
            }
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / top;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        estimate: 0.5 * (lo + hi) - 1.0,
        gap: hi - lo,
    })
}

/// Matrices of one strongly connected component, indexed by the position of
/// each vertex in `vertices`.
#[derive(Debug, Clone)]
pub struct ComponentMatrix {
    pub vertices: Vec<VertexId>,
    /// Internal edges as `(row i, column j, weight)` for an edge `j -> i`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl ComponentMatrix {
    pub fn new(g: &WeightedDigraph, scc: &SccDecomposition, c: usize) -> Self {
        let vertices = scc.component(c).vertices.clone();
        let local = |v: VertexId| vertices.binary_search(&v).ok();
        let mut entries = Vec::new();
        for &u in &vertices {
            for &e in g.out_edges(u) {
                let edge = g.edge(e);
                if let Some(i) = local(edge.target) {
                    entries.push((i, local(u).unwrap(), edge.weight));
                }
            }
        }
        Self { vertices, entries }
    }

    pub fn min_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.2).fold(f64::INFINITY, f64::min)
    }

    /// Edge-count adjacency: entry `(i, j)` is the number of edges `j -> i`.
    pub fn adjacency(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.vertices.len());
        for &(i, j, _) in &self.entries {
            m.add(i, j, 1.0);
        }
        m
    }

    /// `B(s)`: entry `(i, j)` sums `exp(-w / s)` over the edges `j -> i`.
    pub fn decay(&self, s: f64) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.vertices.len());
        for &(i, j, w) in &self.entries {
            m.add(i, j, (-w / s).exp());
        }
        m
    }

    pub fn decay_radius(&self, s: f64) -> Result<f64> {
        spectral_radius(&self.decay(s))
    }
}

/// Bisection state recorded at each step of [`solve_log_rate_traced`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub rho_lo: f64,
    pub hi: f64,
    pub rho_hi: f64,
}

/// The unique `s > 0` with `ρ(B(s)) = 1` for a non-cycle component.
pub fn solve_log_rate(g: &WeightedDigraph, scc: &SccDecomposition, c: usize) -> Result<f64> {
    solve_log_rate_traced(g, scc, c).map(|(s, _)| s)
}

pub fn solve_log_rate_traced(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    c: usize,
) -> Result<(f64, Vec<Bracket>)> {
    let comp = scc.component(c);
    if !comp.nontrivial {
        return Err(Error::TrivialComponent);
    }
    if comp.is_cycle {
        return Err(Error::CycleComponent);
    }
    solve_unit_radius(&ComponentMatrix::new(g, scc, c))
}

/// Root of `ρ(B(s)) = 1` for an irreducible component matrix whose adjacency
/// has spectral radius above 1.
pub fn solve_unit_radius(cm: &ComponentMatrix) -> Result<(f64, Vec<Bracket>)> {
    let mut hi = cm.min_weight();
    let mut rho_hi = cm.decay_radius(hi)?;
    while rho_hi <= 1.0 {
        hi *= 2.0;
        rho_hi = cm.decay_radius(hi)?;
    }
    let mut lo = hi;
    let mut rho_lo = rho_hi;
    while rho_lo >= 1.0 {
        lo *= 0.5;
        rho_lo = cm.decay_radius(lo)?;
    }
    if lo < hi / 2.0 {
        // hi was never raised; tighten it to the last point above 1.
        hi = 2.0 * lo;
        rho_hi = cm.decay_radius(hi)?;
    }
    let mut trace = vec![Bracket {
        lo,
        rho_lo,
        hi,
        rho_hi,
    }];
    while hi - lo > BISECTION_TOLERANCE * hi {
        let mid = 0.5 * (lo + hi);
        let rho = cm.decay_radius(mid)?;
        if rho == 1.0 {
            return Ok((mid, trace));
        }
        if rho < 1.0 {
            lo = mid;
            rho_lo = rho;
        } else {
            hi = mid;
            rho_hi = rho;
        }
        trace.push(Bracket {
            lo,
            rho_lo,
            hi,
            rho_hi,
        });
    }
    Ok((0.5 * (lo + hi), trace))
}

/// Total weight once around a cycle component, summed from its smallest
/// vertex in traversal order.
pub fn cycle_rate(g: &WeightedDigraph, scc: &SccDecomposition, c: usize) -> Result<f64> {
    let comp = scc.component(c);
    if !comp.is_cycle {
        return Err(Error::NotACycle);
    }
    let start = comp.vertices[0];
    let mut v = start;
    let mut total = 0.0;
    loop {
        let e = g
            .out_edges(v)
            .iter()
            .copied()
            .find(|&e| scc.component_of(g.edge(e).target) == c)
            .expect("cycle vertex has an internal out-edge");
        total += g.edge(e).weight;
        v = g.edge(e).target;
        if v == start {
            return Ok(total);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::scc_decompose;

    fn rho(rows: &[Vec<f64>]) -> f64 {
        spectral_radius(&DenseMatrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn radius_of_small_matrices() {
        assert!((rho(&[vec![0.0, 1.0], vec![1.0, 0.0]]) - 1.0).abs() < 1e-13);
        assert!((rho(&[vec![1.0, 1.0], vec![1.0, 1.0]]) - 2.0).abs() < 1e-13);
        assert!((rho(&[vec![0.0, 2.0], vec![0.5, 0.0]]) - 1.0).abs() < 1e-13);
        // golden ratio
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rho(&[vec![1.0, 1.0], vec![1.0, 0.0]]) - phi).abs() < 1e-13);
        assert_eq!(rho(&[vec![0.0]]), 0.0);
        assert!((rho(&[vec![3.5]]) - 3.5).abs() < 1e-14);
    }

    #[test]
    fn radius_of_periodic_cycle() {
        // 5-cycle permutation: eigenvalues are the 5th roots of unity
        let mut rows = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            rows[(i + 1) % 5][i] = 1.0;
        }
        assert!((rho(&rows) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sparse_matches_dense() {
        let g = WeightedDigraph::from_named(
            &["a", "b", "c"],
            &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0), ("a", "a", 1.0), ("b", "a", 1.0)],
        )
        .unwrap();
        let scc = scc_decompose(&g);
        let dense = ComponentMatrix::new(&g, &scc, 0).adjacency();
        let sparse = SparseMatrix::adjacency(&g);
        let a = spectral_radius(&dense).unwrap();
        let b = spectral_radius(&sparse).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.5, 2.0]]);
        assert!(matches!(
            spectral_radius_with(&m, 0.0, 3),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
    }

    #[test]
    fn complete_two_vertex_graph() {
        let g = WeightedDigraph::from_named(
            &["1", "2"],
            &[("1", "1", 1.0), ("1", "2", 1.0), ("2", "1", 1.0), ("2", "2", 1.0)],
        )
        .unwrap();
        let scc = scc_decompose(&g);
        let (s, trace) = solve_log_rate_traced(&g, &scc, 0).unwrap();
        assert!((s - 1.0 / 2f64.ln()).abs() < 1e-10);
        for b in trace {
            assert!(b.rho_lo < 1.0 && 1.0 < b.rho_hi && b.lo < b.hi);
        }
        let cm = ComponentMatrix::new(&g, &scc, 0);
        assert!((cm.decay_radius(s).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn solver_rejects_cycles_and_trivial_components() {
        let cyc = WeightedDigraph::from_named(&["a", "b"], &[("a", "b", 1.0), ("b", "a", 2.0)])
            .unwrap();
        let scc = scc_decompose(&cyc);
        assert_eq!(solve_log_rate(&cyc, &scc, 0), Err(Error::CycleComponent));
        assert_eq!(cycle_rate(&cyc, &scc, 0).unwrap(), 3.0);

        let lone = WeightedDigraph::from_named(&["a"], &[]).unwrap();
        let scc = scc_decompose(&lone);
        assert_eq!(solve_log_rate(&lone, &scc, 0), Err(Error::TrivialComponent));
        assert_eq!(cycle_rate(&lone, &scc, 0), Err(Error::NotACycle));
    }

    #[test]
    fn cycle_weights() {
        let g = WeightedDigraph::from_named(&["a"], &[("a", "a", 0.7)]).unwrap();
        assert_eq!(cycle_rate(&g, &scc_decompose(&g), 0).unwrap(), 0.7);
        let g = WeightedDigraph::from_named(
            &["a", "b", "c"],
            &[("a", "b", 1.0), ("b", "c", 2.0), ("c", "a", 0.5)],
        )
        .unwrap();
        assert_eq!(cycle_rate(&g, &scc_decompose(&g), 0).unwrap(), 3.5);
        let g = WeightedDigraph::from_named(&["a", "b"], &[("a", "b", 1.0), ("b", "a", 1.0)])
            .unwrap();
        assert_eq!(cycle_rate(&g, &scc_decompose(&g), 0).unwrap(), 2.0);
    }
}
