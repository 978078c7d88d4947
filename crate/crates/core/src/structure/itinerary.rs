//! Itineraries and their inverse: the variants that factor every path from
//! `v1` to `v2` into dwells inside strongly connected components and single
//! edges between components.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde_json::{json, Value};

use super::scc::{relevant_vertices, SccDecomposition};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Path, VertexId, WeightedDigraph};

pub const DEFAULT_VARIANT_GUARD: usize = 1_000_000;

/// Collapsed vertex list of a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary(pub Vec<VertexId>);

impl Itinerary {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Applies the collapse rule left to right until no triple `u ↔ v ↔ w`
/// remains in the interior of the list.
///
/// Since `↔` is an equivalence, this keeps the two ends of every maximal run
/// of consecutive vertices from one component, which a stack does in one pass.
pub fn collapse(list: &[VertexId], scc: &SccDecomposition) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(list.len());
    for &x in list {
        if let [.., u, v] = out[..] {
            if scc.related(u, v) && scc.related(v, x) {
                out.pop();
            }
        }
        out.push(x);
    }
    out
}

pub fn itinerary(x: &Path, g: &WeightedDigraph, scc: &SccDecomposition) -> Itinerary {
    Itinerary(collapse(&x.vertex_list(g), scc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Any path inside `component` from `entry` to `exit` (at least one edge).
    Dwell {
        component: usize,
        entry: VertexId,
        exit: VertexId,
    },
    /// One concrete edge between two different components.
    Edge(EdgeId),
}

/// One member of the partition of `X(v1, v2)`: an itinerary together with the
/// concrete transition edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItineraryVariant {
    pub start: VertexId,
    pub steps: Vec<Step>,
}

impl ItineraryVariant {
    pub fn itinerary(&self, g: &WeightedDigraph) -> Itinerary {
        let mut out = vec![self.start];
        for step in &self.steps {
            out.push(match *step {
                Step::Dwell { exit, .. } => exit,
                Step::Edge(e) => g.edge(e).target,
            });
        }
        Itinerary(out)
    }

    /// Positions (0-based transition index) that are dwells.
    pub fn dwell_positions(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Step::Dwell { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    /// Positions that are single edges.
    pub fn edge_positions(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Step::Edge(_)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn dwelled_components(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Dwell { component, .. } => Some(*component),
                Step::Edge(_) => None,
            })
            .collect()
    }

    pub fn dwell_count(&self) -> usize {
        self.dwell_positions().len()
    }

    /// Weight of the lightest path with this variant.
    pub fn min_weight(&self, g: &WeightedDigraph, scc: &SccDecomposition) -> f64 {
        self.steps.iter().fold(0.0, |acc, step| {
            acc + match *step {
                Step::Edge(e) => g.edge(e).weight,
                Step::Dwell {
                    component,
                    entry,
                    exit,
                } => shortest_within(g, scc, component, entry, exit),
            }
        })
    }

    pub fn to_json(&self, g: &WeightedDigraph) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| match *s {
                Step::Dwell {
                    component,
                    entry,
                    exit,
                } => json!({"dwell": {"component": component, "entry": g.name(entry), "exit": g.name(exit)}}),
                Step::Edge(e) => {
                    let edge = g.edge(e);
                    json!({"edge": {"id": e, "from": g.name(edge.source), "to": g.name(edge.target), "weight": edge.weight}})
                }
            })
            .collect();
        let itin: Vec<&str> = self.itinerary(g).0.iter().map(|&v| g.name(v)).collect();
        json!({"itinerary": itin, "steps": steps})
    }
}

/// Lightest non-empty path from `from` to `to` staying inside component `c`.
pub fn shortest_within(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    c: usize,
    from: VertexId,
    to: VertexId,
) -> f64 {
    let mut dist: HashMap<VertexId, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for &e in g.out_edges(from) {
        let edge = g.edge(e);
        if scc.component_of(edge.target) == c {
            heap.push(Reverse((Ordered(edge.weight), edge.target)));
        }
    }
    while let Some(Reverse((Ordered(d), u))) = heap.pop() {
        if dist.contains_key(&u) {
            continue;
        }
        dist.insert(u, d);
        if u == to {
            return d;
        }
        for &e in g.out_edges(u) {
            let edge = g.edge(e);
            if scc.component_of(edge.target) == c && !dist.contains_key(&edge.target) {
                heap.push(Reverse((Ordered(d + edge.weight), edge.target)));
            }
        }
    }
    f64::INFINITY
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ordered(f64);
impl Eq for Ordered {}
impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// One factor of a path under its variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Dwell {
        component: usize,
        entry: VertexId,
        exit: VertexId,
        edges: Vec<EdgeId>,
    },
    Edge(EdgeId),
}

/// Splits a path into maximal runs of intra-component edges (dwells) and the
/// edges that cross between components.
pub fn factorize(x: &Path, g: &WeightedDigraph, scc: &SccDecomposition) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut run: Vec<EdgeId> = Vec::new();
    let flush = |run: &mut Vec<EdgeId>, out: &mut Vec<Factor>| {
        if let (Some(&first), Some(&last)) = (run.first(), run.last()) {
            let entry = g.edge(first).source;
            out.push(Factor::Dwell {
                component: scc.component_of(entry),
                entry,
                exit: g.edge(last).target,
                edges: std::mem::take(run),
            });
        }
    };
    for &e in x.edges() {
        let edge = g.edge(e);
        if scc.component_of(edge.source) == scc.component_of(edge.target) {
            run.push(e);
        } else {
            flush(&mut run, &mut out);
            out.push(Factor::Edge(e));
        }
    }
    flush(&mut run, &mut out);
    out
}

/// The variant a path belongs to.
pub fn variant_of_path(x: &Path, g: &WeightedDigraph, scc: &SccDecomposition) -> ItineraryVariant {
    let steps = factorize(x, g, scc)
        .into_iter()
        .map(|f| match f {
            Factor::Dwell {
                component,
                entry,
                exit,
                ..
            } => Step::Dwell {
                component,
                entry,
                exit,
            },
            Factor::Edge(e) => Step::Edge(e),
        })
        .collect();
    ItineraryVariant {
        start: x.source(g),
        steps,
    }
}

/// Lists every itinerary variant of `X(v1, v2)` in a deterministic order
/// (depth first; dwell exits by vertex id, pass-through last; edges by id).
pub fn enumerate_variants(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    v1: VertexId,
    v2: VertexId,
    guard: usize,
) -> Result<Vec<ItineraryVariant>> {
    let relevant = relevant_vertices(g, v1, v2)?;
    if relevant.is_empty() {
        return Err(Error::NoPath {
            from: g.name(v1).to_string(),
            to: g.name(v2).to_string(),
        });
    }
    let mut walker = VariantWalker {
        g,
        scc,
        relevant: &relevant,
        v2,
        guard,
        steps: Vec::new(),
        out: Vec::new(),
    };
    walker.enter(v1, false)?;
    Ok(walker
        .out
        .into_iter()
        .map(|steps| ItineraryVariant { start: v1, steps })
        .collect())
}

struct VariantWalker<'a> {
    g: &'a WeightedDigraph,
    scc: &'a SccDecomposition,
    relevant: &'a BTreeSet<VertexId>,
    v2: VertexId,
    guard: usize,
    steps: Vec<Step>,
    out: Vec<Vec<Step>>,
}

impl VariantWalker<'_> {
    fn enter(&mut self, u: VertexId, nonempty: bool) -> Result<()> {
        let c = self.scc.component_of(u);
        let comp = self.scc.component(c);
        if comp.nontrivial {
            for &q in &comp.vertices {
                self.steps.push(Step::Dwell {
                    component: c,
                    entry: u,
                    exit: q,
                });
                self.leave(q)?;
                self.steps.pop();
            }
        }
        if nonempty || u != self.v2 {
            self.leave(u)?;
        }
        Ok(())
    }

    fn leave(&mut self, q: VertexId) -> Result<()> {
        if q == self.v2 {
            if self.out.len() >= self.guard {
                return Err(Error::GuardExceeded {
                    what: "variant",
                    limit: self.guard,
                });
            }
            self.out.push(self.steps.clone());
            return Ok(());
        }
        let c = self.scc.component_of(q);
        if c == self.scc.component_of(self.v2) {
            return Ok(());
        }
        for &e in self.g.out_edges(q) {
            let t = self.g.edge(e).target;
            if self.scc.component_of(t) != c && self.relevant.contains(&t) {
                self.steps.push(Step::Edge(e));
                self.enter(t, true)?;
                self.steps.pop();
            }
        }
        Ok(())
    }
}

/// An aggregate over variants that can be computed by dynamic programming on
/// the condensation, without listing the variants.
pub trait VariantMeasure: Clone {
    /// No variants.
    fn zero() -> Self;
    /// The variant with no remaining steps.
    fn unit() -> Self;
    /// Disjoint union of two variant sets.
    fn plus(self, other: Self) -> Self;
    /// Prefixes a dwell to every variant in the set.
    fn dwell(self, g: &WeightedDigraph, scc: &SccDecomposition, component: usize) -> Self;
    /// Prefixes an edge to every variant in the set.
    fn edge(self, g: &WeightedDigraph, e: EdgeId) -> Self;
}

/// Evaluates a [`VariantMeasure`] over the full variant set of `X(v1, v2)`.
pub fn fold_variants<M: VariantMeasure>(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    v1: VertexId,
    v2: VertexId,
) -> Result<M> {
    let relevant = relevant_vertices(g, v1, v2)?;
    if relevant.is_empty() {
        return Err(Error::NoPath {
            from: g.name(v1).to_string(),
            to: g.name(v2).to_string(),
        });
    }
    let mut folder = Folder {
        g,
        scc,
        relevant: &relevant,
        v2,
        entered: HashMap::new(),
        left: HashMap::new(),
    };
    Ok(folder.enter(v1, false))
}

struct Folder<'a, M> {
    g: &'a WeightedDigraph,
    scc: &'a SccDecomposition,
    relevant: &'a BTreeSet<VertexId>,
    v2: VertexId,
    entered: HashMap<(VertexId, bool), M>,
    left: HashMap<VertexId, M>,
}

impl<M: VariantMeasure> Folder<'_, M> {
    fn enter(&mut self, u: VertexId, nonempty: bool) -> M {
        if let Some(m) = self.entered.get(&(u, nonempty)) {
            return m.clone();
        }
        let c = self.scc.component_of(u);
        let mut acc = M::zero();
        if self.scc.component(c).nontrivial {
            for q in self.scc.component(c).vertices.clone() {
                acc = acc.plus(self.leave(q).dwell(self.g, self.scc, c));
            }
        }
        if nonempty || u != self.v2 {
            acc = acc.plus(self.leave(u));
        }
        self.entered.insert((u, nonempty), acc.clone());
        acc
    }

    fn leave(&mut self, q: VertexId) -> M {
        if let Some(m) = self.left.get(&q) {
            return m.clone();
        }
        let c = self.scc.component_of(q);
        let result = if q == self.v2 {
            M::unit()
        } else if c == self.scc.component_of(self.v2) {
            M::zero()
        } else {
            let mut acc = M::zero();
            for &e in self.g.out_edges(q) {
                let t = self.g.edge(e).target;
                if self.scc.component_of(t) != c && self.relevant.contains(&t) {
                    acc = acc.plus(self.enter(t, true).edge(self.g, e));
                }
            }
            acc
        };
        self.left.insert(q, result.clone());
        result
    }
}

/// Number of variants; `None` on `u64` overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariantCount(pub Option<u64>);

impl VariantMeasure for VariantCount {
    fn zero() -> Self {
        VariantCount(Some(0))
    }
    fn unit() -> Self {
        VariantCount(Some(1))
    }
    fn plus(self, other: Self) -> Self {
        VariantCount(self.0.zip(other.0).and_then(|(a, b)| a.checked_add(b)))
    }
    fn dwell(self, _: &WeightedDigraph, _: &SccDecomposition, _: usize) -> Self {
        self
    }
    fn edge(self, _: &WeightedDigraph, _: EdgeId) -> Self {
        self
    }
}

/// Number of variants of `X(v1, v2)`, computed without listing them.
pub fn count_variants(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    v1: VertexId,
    v2: VertexId,
) -> Result<u64> {
    fold_variants::<VariantCount>(g, scc, v1, v2)?
        .0
        .ok_or(Error::CountOverflow("variants"))
}
