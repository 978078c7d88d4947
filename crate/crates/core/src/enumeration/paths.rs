//! Best-first enumeration of all paths between two vertices in order of
//! weight, loops included.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::sequence::{Key, Outcome, RankedWeight, WeightSequence, DEFAULT_FRONTIER_GUARD};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Path, VertexId, WeightedDigraph};
use crate::structure::relevant_vertices;

/// Where to stop. At least one bound must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Limit {
    pub max_rank: Option<u64>,
    pub max_weight: Option<f64>,
}

impl Limit {
    pub fn rank(r: u64) -> Self {
        Self {
            max_rank: Some(r),
            max_weight: None,
        }
    }

    pub fn weight(w: f64) -> Self {
        Self {
            max_rank: None,
            max_weight: Some(w),
        }
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Label {
    parent: u32,
    edge: u32,
    len: u32,
    at: u32,
}

/// Stream of the paths from `v1` to `v2` in non-decreasing weight.
///
/// Equal weights are ordered by length, then lexicographically by edge ids.
/// Weights are accumulated edge by edge from the start of the path, the same
/// order as [`Path::weight`], so emitted weights are bit-identical to it.
pub struct PathStream<'g> {
    g: &'g WeightedDigraph,
    v2: VertexId,
    relevant: Vec<bool>,
    labels: Vec<Label>,
    heap: BinaryHeap<Reverse<(Key, u32)>>,
    ready: VecDeque<(f64, Option<Path>)>,
    limit: Limit,
    guard: usize,
    emitted: u64,
    halted: bool,
    materialize: bool,
    outcome: Outcome,
}

pub fn enumerate_paths(
    g: &WeightedDigraph,
    v1: VertexId,
    v2: VertexId,
    limit: Limit,
) -> Result<PathStream<'_>> {
    enumerate_paths_guarded(g, v1, v2, limit, DEFAULT_FRONTIER_GUARD)
}

pub fn enumerate_paths_guarded(
    g: &WeightedDigraph,
    v1: VertexId,
    v2: VertexId,
    limit: Limit,
    guard: usize,
) -> Result<PathStream<'_>> {
    let finite_weight = limit.max_weight.is_some_and(f64::is_finite);
    if limit.max_rank.is_none() && !finite_weight {
        return Err(Error::InvalidArgument(
            "a maximum rank or a finite maximum weight is required".into(),
        ));
    }
    let vt = relevant_vertices(g, v1, v2)?;
    let mut relevant = vec![false; g.vertex_count()];
    for &v in &vt {
        relevant[v] = true;
    }
    let mut stream = PathStream {
        g,
        v2,
        relevant,
        labels: Vec::new(),
        heap: BinaryHeap::new(),
        ready: VecDeque::new(),
        limit,
        guard,
        emitted: 0,
        halted: false,
        materialize: true,
        outcome: Outcome::default(),
    };
    for &e in g.out_edges(v1) {
        stream.push(NO_PARENT, e, 0.0, 0);
    }
    Ok(stream)
}

impl<'g> PathStream<'g> {
    fn push(&mut self, parent: u32, e: EdgeId, base: f64, len: u32) -> bool {
        let edge = self.g.edge(e);
        if !self.relevant[edge.target] {
            return true;
        }
        if self.labels.len() + 1 > self.guard {
            let _ = self.outcome.set(Error::GuardExceeded {
                what: "frontier",
                limit: self.guard,
            });
            return false;
        }
        let id = self.labels.len() as u32;
        self.labels.push(Label {
            parent,
            edge: e as u32,
            len: len + 1,
            at: edge.target as u32,
        });
        self.heap.push(Reverse((Key(base + edge.weight), id)));
        true
    }

    fn edges_of(&self, mut id: u32) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.labels[id as usize].len as usize);
        while id != NO_PARENT {
            let l = self.labels[id as usize];
            out.push(l.edge as EdgeId);
            id = l.parent;
        }
        out.reverse();
        out
    }

    /// Pops every frontier entry of the current minimum weight. All complete
    /// paths of that weight are in the frontier at this point, since their
    /// prefixes are strictly lighter.
    fn fill(&mut self) {
        while self.ready.is_empty() && !self.halted {
            let Some(&Reverse((Key(w), _))) = self.heap.peek() else {
                self.halted = true;
                return;
            };
            if self.limit.max_weight.is_some_and(|t| w > t) {
                self.halted = true;
                return;
            }
            let mut cluster: Vec<u32> = Vec::new();
            while let Some(&Reverse((Key(x), id))) = self.heap.peek() {
                if x != w {
                    break;
                }
                self.heap.pop();
                let label = self.labels[id as usize];
                if label.at as usize == self.v2 {
                    cluster.push(id);
                }
                if self.halted {
                    continue;
                }
                for &e in self.g.out_edges(label.at as usize) {
                    if !self.push(id, e, w, label.len) {
                        // Guard hit: finish this weight class, then stop.
                        self.halted = true;
                        break;
                    }
                }
            }
            if !self.materialize {
                self.ready.extend(cluster.iter().map(|_| (w, None)));
                continue;
            }
            let mut paths: Vec<Vec<EdgeId>> = cluster.iter().map(|&id| self.edges_of(id)).collect();
            paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            self.ready
                .extend(paths.into_iter().map(|p| (w, Some(Path::from_trusted(p)))));
        }
    }

    /// Emit weights only; paths are not rebuilt.
    pub fn without_paths(mut self) -> Self {
        self.materialize = false;
        self
    }

    /// Frontier entries currently queued.
    pub fn frontier_len(&self) -> usize {
        self.heap.len()
    }

    /// Set if the frontier guard stopped the stream early.
    pub fn error(&self) -> Option<&Error> {
        self.outcome.get()
    }

    pub fn into_sequence(self) -> WeightSequence<'g> {
        let outcome = self.outcome.clone();
        WeightSequence::with_outcome(self.map(|r| (r.weight, r.path)), outcome)
    }

    /// Weights only, without the paths.
    pub fn into_weights(self) -> WeightSequence<'g> {
        self.without_paths().into_sequence()
    }
}

impl Iterator for PathStream<'_> {
    type Item = RankedWeight;

    fn next(&mut self) -> Option<RankedWeight> {
        if self.limit.max_rank.is_some_and(|r| self.emitted >= r) {
            return None;
        }
        if self.ready.is_empty() {
            self.fill();
        }
        let (weight, path) = self.ready.pop_front()?;
        self.emitted += 1;
        Some(RankedWeight {
            rank: self.emitted,
            weight,
            path,
        })
    }
}
