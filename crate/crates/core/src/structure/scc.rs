use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedDigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertex ids.
    pub vertices: Vec<VertexId>,
    /// True when some closed walk exists inside the component, i.e. the
    /// component is a strongly connected component rather than a lone
    /// acyclic vertex.
    pub nontrivial: bool,
    pub is_cycle: bool,
    /// gcd of closed-walk lengths; `None` for trivial components.
    pub period: Option<u64>,
}

/// Strongly connected components of a graph with their condensation.
///
/// Components are listed in reverse topological order of the condensation:
/// every condensation edge goes from a higher index to a lower one.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    components: Vec<Component>,
    component_of: Vec<usize>,
    successors: Vec<BTreeSet<usize>>,
}

impl SccDecomposition {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &Component {
        &self.components[c]
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component_of[v]
    }

    /// Condensation successors of component `c` (excluding `c` itself).
    pub fn successors(&self, c: usize) -> &BTreeSet<usize> {
        &self.successors[c]
    }

    /// `u ↔ v`: both lie in the same non-trivial component.
    pub fn related(&self, u: VertexId, v: VertexId) -> bool {
        let c = self.component_of[u];
        c == self.component_of[v] && self.components[c].nontrivial
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Tarjan's algorithm, iterative, visiting vertices and out-edges in id order.
pub fn scc_decompose(g: &WeightedDigraph) -> SccDecomposition {
    let n = g.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut raw: Vec<Vec<VertexId>> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, position in its out-edge list)
        let mut call: Vec<(VertexId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let (v, pos) = *top;
            let outs = g.out_edges(v);
            if pos < outs.len() {
                let w = g.edge(outs[pos]).target;
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                raw.push(comp);
            }
        }
    }

    let mut component_of = vec![0; n];
    for (c, comp) in raw.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut successors = vec![BTreeSet::new(); raw.len()];
    let mut internal_in = vec![0usize; n];
    let mut internal_out = vec![0usize; n];
    let mut has_internal_edge = vec![false; raw.len()];
    for e in g.edges() {
        let (cs, ct) = (component_of[e.source], component_of[e.target]);
        if cs == ct {
            has_internal_edge[cs] = true;
            internal_out[e.source] += 1;
            internal_in[e.target] += 1;
        } else {
            successors[cs].insert(ct);
        }
    }

    let components = raw
        .into_iter()
        .enumerate()
        .map(|(c, vertices)| {
            // A singleton is non-trivial only with a self-loop; larger
            // components always contain a closed walk.
            let nontrivial = vertices.len() > 1 || has_internal_edge[c];
            let is_cycle = nontrivial
                && vertices
                    .iter()
                    .all(|&v| internal_in[v] == 1 && internal_out[v] == 1);
            let period = nontrivial.then(|| component_period(g, &vertices, &component_of, c));
            Component {
                vertices,
                nontrivial,
                is_cycle,
                period,
            }
        })
        .collect();

    SccDecomposition {
        components,
        component_of,
        successors,
    }
}

/// gcd of `level(u) + 1 - level(v)` over internal edges `u -> v`, where levels
/// come from a BFS inside the component.
fn component_period(
    g: &WeightedDigraph,
    vertices: &[VertexId],
    component_of: &[usize],
    c: usize,
) -> u64 {
    let root = vertices[0];
    let mut level = vec![i64::MIN; g.vertex_count()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let v = g.edge(e).target;
            if component_of[v] == c && level[v] == i64::MIN {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut d: u64 = 0;
    for &u in vertices {
        for &e in g.out_edges(u) {
            let v = g.edge(e).target;
            if component_of[v] == c {
                d = gcd(d, (level[u] + 1 - level[v]).unsigned_abs());
            }
        }
    }
    d
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Period of component `c`; errors for a trivial component.
pub fn period(scc: &SccDecomposition, c: usize) -> Result<u64> {
    scc.component(c).period.ok_or(Error::TrivialComponent)
}

fn reach(g: &WeightedDigraph, starts: impl IntoIterator<Item = VertexId>, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let edges = if forward { g.out_edges(u) } else { g.in_edges(u) };
        for &e in edges {
            let edge = g.edge(e);
            let v = if forward { edge.target } else { edge.source };
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// `vt(X)` for the path set `X` from `v1` to `v2`: every vertex lying on at
/// least one such path. Empty when no path exists.
pub fn relevant_vertices(g: &WeightedDigraph, v1: VertexId, v2: VertexId) -> Result<BTreeSet<VertexId>> {
    for v in [v1, v2] {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let (fwd, bwd) = if v1 == v2 {
        // Paths are non-empty, so reachability is via at least one edge.
        let succ = g.out_edges(v1).iter().map(|&e| g.edge(e).target);
        let pred = g.in_edges(v2).iter().map(|&e| g.edge(e).source);
        (reach(g, succ, true), reach(g, pred, false))
    } else {
        (reach(g, [v1], true), reach(g, [v2], false))
    };
    if !fwd[v2] {
        return Ok(BTreeSet::new());
    }
    Ok((0..g.vertex_count()).filter(|&u| fwd[u] && bwd[u]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str, f64)]) -> WeightedDigraph {
        WeightedDigraph::from_named(vs, es).unwrap()
    }

    #[test]
    fn lone_vertex_is_trivial() {
        let d = scc_decompose(&g(&["a"], &[]));
        assert_eq!(d.len(), 1);
        assert!(!d.component(0).nontrivial);
        assert_eq!(period(&d, 0), Err(Error::TrivialComponent));
    }

    #[test]
    fn two_cycle() {
        let d = scc_decompose(&g(&["a", "b"], &[("a", "b", 1.0), ("b", "a", 1.0)]));
        assert_eq!(d.len(), 1);
        let c = d.component(0);
        assert!(c.nontrivial && c.is_cycle);
        assert_eq!(c.period, Some(2));
    }

    #[test]
    fn self_loop_singleton_plus_pair() {
        // One singleton with a self-loop feeding a two-vertex component.
        let d = scc_decompose(&g(
            &["s", "p", "q"],
            &[("s", "s", 1.0), ("s", "p", 1.0), ("p", "q", 1.0), ("q", "p", 1.0)],
        ));
        let nontrivial: Vec<_> = d.components().iter().filter(|c| c.nontrivial).collect();
        assert_eq!(nontrivial.len(), 2);
        assert_eq!(d.component(d.component_of(0)).period, Some(1));
        assert!(d.successors(d.component_of(0)).contains(&d.component_of(1)));
        // reverse topological order
        assert!(d.component_of(0) > d.component_of(1));
    }

    #[test]
    fn periods() {
        let loop1 = scc_decompose(&g(&["a"], &[("a", "a", 1.0)]));
        assert_eq!(loop1.component(0).period, Some(1));
        assert!(loop1.component(0).is_cycle);
        let mixed = scc_decompose(&g(
            &["a", "b"],
            &[("a", "b", 1.0), ("b", "a", 1.0), ("a", "a", 1.0)],
        ));
        assert_eq!(mixed.component(0).period, Some(1));
        assert!(!mixed.component(0).is_cycle);
        let p3 = scc_decompose(&g(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", 1.0),
                ("b", "c", 1.0),
                ("c", "a", 1.0),
                ("c", "d", 1.0),
                ("d", "b", 1.0),
            ],
        ));
        // cycles of length 3 (abc) and 3 (bcd)
        assert_eq!(p3.component(0).period, Some(3));
    }

    #[test]
    fn parallel_edges_break_cycle_flag() {
        let d = scc_decompose(&g(
            &["a", "b"],
            &[("a", "b", 1.0), ("a", "b", 2.0), ("b", "a", 1.0)],
        ));
        assert!(!d.component(0).is_cycle);
    }

    #[test]
    fn relevant_vertex_sets() {
        let chain = g(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0)]);
        assert_eq!(relevant_vertices(&chain, 0, 2).unwrap(), BTreeSet::from([0, 1, 2]));
        assert!(relevant_vertices(&chain, 2, 0).unwrap().is_empty());
        assert!(relevant_vertices(&chain, 1, 1).unwrap().is_empty());
        assert!(relevant_vertices(&chain, 0, 7).is_err());

        let pendant = g(
            &["a", "b", "d"],
            &[("a", "b", 1.0), ("b", "a", 1.0), ("a", "d", 1.0)],
        );
        assert_eq!(relevant_vertices(&pendant, 0, 0).unwrap(), BTreeSet::from([0, 1]));
    }
}
