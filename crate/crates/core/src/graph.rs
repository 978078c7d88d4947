//! Weighted directed multigraphs, paths on them, and the JSON graph format.
//!
//! Vertices are addressed internally by dense indices (`VertexId`) and carry a
//! display name. Edges are addressed by their position in the edge list
//! (`EdgeId`). Parallel edges and self-loops are allowed; every weight is a
//! finite, strictly positive `f64`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: f64,
}

/// Finite directed multigraph with strictly positive edge weights.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl WeightedDigraph {
    /// Builds a graph from vertex names and `(source, target, weight)` triples
    /// over vertex indices. Edge `i` of the result is triple `i`.
    pub fn new(names: Vec<String>, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let n = names.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for (id, (source, target, weight)) in edges.into_iter().enumerate() {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::NonPositiveWeight { edge: id, weight });
            }
            for v in [source, target] {
                if v >= n {
                    return Err(Error::DanglingEndpoint {
                        edge: id,
                        vertex: v.to_string(),
                    });
                }
            }
            out_edges[source].push(id);
            in_edges[target].push(id);
            stored.push(Edge {
                source,
                target,
                weight,
            });
        }
        Ok(Self {
            names,
            index,
            edges: stored,
            out_edges,
            in_edges,
        })
    }

    /// Convenience constructor from names, mostly for tests and examples.
    pub fn from_named(vertices: &[&str], edges: &[(&str, &str, f64)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let lookup: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect();
        let mut triples = Vec::with_capacity(edges.len());
        for (id, (from, to, w)) in edges.iter().enumerate() {
            let s = *lookup.get(from).ok_or_else(|| Error::DanglingEndpoint {
                edge: id,
                vertex: from.to_string(),
            })?;
            let t = *lookup.get(to).ok_or_else(|| Error::DanglingEndpoint {
                edge: id,
                vertex: to.to_string(),
            })?;
            triples.push((s, t, *w));
        }
        Self::new(names, triples)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// `E(u, v)`: ids of all edges from `u` to `v`, in id order.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.out_edges[u]
            .iter()
            .copied()
            .filter(|&e| self.edges[e].target == v)
            .collect()
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::min)
    }

    /// Copy of the graph with every edge weight multiplied by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(
            self.names.clone(),
            self.edges
                .iter()
                .map(|e| (e.source, e.target, e.weight * t))
                .collect(),
        )
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    from: self.names[e.source].clone(),
                    to: self.names[e.target].clone(),
                    weight: e.weight,
                    id: None,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    #[serde(alias = "w")]
    pub weight: f64,
    /// Optional explicit id. When present on any edge it must be present on
    /// all of them and form a permutation of `0..n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<usize>,
}

/// Parses the JSON graph format:
/// `{"vertices": [..], "edges": [{"from", "to", "weight"}, ..]}`.
pub fn parse_graph(document: &str) -> Result<WeightedDigraph> {
    let doc: GraphDocument = serde_json::from_str(document)?;
    graph_from_document(doc)
}

pub fn graph_from_document(doc: GraphDocument) -> Result<WeightedDigraph> {
    let mut lookup = HashMap::with_capacity(doc.vertices.len());
    for (i, name) in doc.vertices.iter().enumerate() {
        if lookup.insert(name.as_str(), i).is_some() {
            return Err(Error::DuplicateVertex(name.clone()));
        }
    }

    let explicit = doc.edges.iter().filter(|e| e.id.is_some()).count();
    let order: Vec<usize> = if explicit == 0 {
        (0..doc.edges.len()).collect()
    } else if explicit != doc.edges.len() {
        return Err(Error::Malformed(
            "edge ids must be given for all edges or none".into(),
        ));
    } else {
        let mut slot = vec![usize::MAX; doc.edges.len()];
        let mut seen = HashSet::new();
        for (pos, e) in doc.edges.iter().enumerate() {
            let id = e.id.unwrap();
            if !seen.insert(id) {
                return Err(Error::DuplicateEdge(id));
            }
            if id >= doc.edges.len() {
                return Err(Error::Malformed(format!(
                    "edge id {id} out of range 0..{}",
                    doc.edges.len()
                )));
            }
            slot[id] = pos;
        }
        slot
    };

    let mut triples = Vec::with_capacity(doc.edges.len());
    for (id, &pos) in order.iter().enumerate() {
        let rec = &doc.edges[pos];
        if !(rec.weight.is_finite() && rec.weight > 0.0) {
            return Err(Error::NonPositiveWeight {
                edge: id,
                weight: rec.weight,
            });
        }
        let s = *lookup
            .get(rec.from.as_str())
            .ok_or_else(|| Error::DanglingEndpoint {
                edge: id,
                vertex: rec.from.clone(),
            })?;
        let t = *lookup
            .get(rec.to.as_str())
            .ok_or_else(|| Error::DanglingEndpoint {
                edge: id,
                vertex: rec.to.clone(),
            })?;
        triples.push((s, t, rec.weight));
    }
    WeightedDigraph::new(doc.vertices, triples)
}

/// A non-empty chain of edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    /// Validates that `edges` is non-empty, every id exists in `g` and
    /// consecutive edges chain head to tail.
    pub fn new(g: &WeightedDigraph, edges: Vec<EdgeId>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyPath);
        }
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
        }
        for pair in edges.windows(2) {
            if g.edge(pair[0]).target != g.edge(pair[1]).source {
                return Err(Error::BrokenPath(pair[0], pair[1]));
            }
        }
        Ok(Self { edges })
    }

    /// Wraps an edge list the caller already knows to be a valid path.
    pub(crate) fn from_trusted(edges: Vec<EdgeId>) -> Self {
        debug_assert!(!edges.is_empty());
        Self { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Number of edges, `l(x)`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self, g: &WeightedDigraph) -> VertexId {
        g.edge(self.edges[0]).source
    }

    pub fn target(&self, g: &WeightedDigraph) -> VertexId {
        g.edge(*self.edges.last().unwrap()).target
    }

    /// Sum of edge weights, accumulated left to right in edge order.
    pub fn weight(&self, g: &WeightedDigraph) -> f64 {
        self.edges.iter().fold(0.0, |acc, &e| acc + g.edge(e).weight)
    }

    /// `vl(x)`: source of every edge followed by the final target.
    pub fn vertex_list(&self, g: &WeightedDigraph) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.edges.iter().map(|&e| g.edge(e).source).collect();
        out.push(self.target(g));
        out
    }

    /// `vt(x)`: the set of vertices met by the path.
    pub fn vertex_set(&self, g: &WeightedDigraph) -> std::collections::BTreeSet<VertexId> {
        self.vertex_list(g).into_iter().collect()
    }

    /// Concatenation `xy`; fails if `x` does not end where `y` starts.
    pub fn concat(&self, other: &Path, g: &WeightedDigraph) -> Result<Path> {
        let last = *self.edges.last().unwrap();
        if self.target(g) != other.source(g) {
            return Err(Error::BrokenPath(last, other.edges[0]));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path { edges })
    }
}

/// Weight of a path given as raw edge ids, validating it first.
pub fn path_weight(x: &Path, g: &WeightedDigraph) -> Result<f64> {
    let checked = Path::new(g, x.edges.clone())?;
    Ok(checked.weight(g))
}

/// Result of [`normalize_simple_with_map`]: the simple graph plus, for every
/// original edge, the one or two edges that replace it.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub graph: WeightedDigraph,
    pub edge_map: Vec<Vec<EdgeId>>,
}

/// Splits every member of a parallel-edge bundle into two half-weight edges
/// through a fresh vertex, so that the result has at most one edge per
/// ordered vertex pair.
pub fn normalize_simple(g: &WeightedDigraph) -> WeightedDigraph {
    normalize_simple_with_map(g).graph
}

pub fn normalize_simple_with_map(g: &WeightedDigraph) -> Normalized {
    let mut bundle: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for e in g.edges() {
        *bundle.entry((e.source, e.target)).or_default() += 1;
    }

    let mut names = g.names().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut triples = Vec::new();
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for (id, e) in g.edges().iter().enumerate() {
        if bundle[&(e.source, e.target)] <= 1 {
            edge_map.push(vec![triples.len()]);
            triples.push((e.source, e.target, e.weight));
            continue;
        }
        let mut name = format!("{}~{}#{}", g.name(e.source), g.name(e.target), id);
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        let mid = names.len();
        names.push(name);
        let half = e.weight / 2.0;
        edge_map.push(vec![triples.len(), triples.len() + 1]);
        triples.push((e.source, mid, half));
        triples.push((mid, e.target, half));
    }
    let graph = WeightedDigraph::new(names, triples).expect("split graph stays valid");
    Normalized { graph, edge_map }
}
