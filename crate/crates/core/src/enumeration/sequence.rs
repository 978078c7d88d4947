//! Lazy non-decreasing weight streams and their composition and union.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::graph::Path;

pub const DEFAULT_FRONTIER_GUARD: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedWeight {
    /// 1-based rank.
    pub rank: u64,
    pub weight: f64,
    pub path: Option<Path>,
}

/// Set once by a stream that had to stop early (e.g. a memory guard); the
/// entries emitted before that point remain valid.
pub type Outcome = Arc<OnceLock<Error>>;

/// A single-consumer stream of weights in non-decreasing order, ranked from 1.
pub struct WeightSequence<'a> {
    source: Box<dyn Iterator<Item = (f64, Option<Path>)> + Send + 'a>,
    rank: u64,
    outcome: Outcome,
}

impl<'a> WeightSequence<'a> {
    pub fn new(source: impl Iterator<Item = (f64, Option<Path>)> + Send + 'a) -> Self {
        Self::with_outcome(source, Outcome::default())
    }

    pub fn with_outcome(
        source: impl Iterator<Item = (f64, Option<Path>)> + Send + 'a,
        outcome: Outcome,
    ) -> Self {
        Self {
            source: Box::new(source),
            rank: 0,
            outcome,
        }
    }

    /// Why the stream stopped early, if it did.
    pub fn error(&self) -> Option<&Error> {
        self.outcome.get()
    }

    /// Wraps a stream of bare weights. The caller guarantees the order.
    pub fn from_weights(weights: impl Iterator<Item = f64> + Send + 'a) -> Self {
        Self::new(weights.map(|w| (w, None)))
    }

    /// The next weight, dropping rank and path.
    pub fn next_weight(&mut self) -> Option<f64> {
        self.next().map(|r| r.weight)
    }

    /// Materializes up to `n` weights.
    pub fn take_weights(self, n: usize) -> Vec<f64> {
        self.take(n).map(|r| r.weight).collect()
    }
}

impl Iterator for WeightSequence<'_> {
    type Item = RankedWeight;

    fn next(&mut self) -> Option<RankedWeight> {
        let (weight, path) = self.source.next()?;
        self.rank += 1;
        Some(RankedWeight {
            rank: self.rank,
            weight,
            path,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Key(pub f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Pulls from a stream on demand and remembers what it has seen.
struct Memo<'a> {
    source: WeightSequence<'a>,
    values: Vec<f64>,
    done: bool,
}

impl Memo<'_> {
    fn get(&mut self, i: usize) -> Option<f64> {
        while self.values.len() <= i && !self.done {
            match self.source.next_weight() {
                Some(w) => self.values.push(w),
                None => self.done = true,
            }
        }
        self.values.get(i).copied()
    }
}

/// Lazily yields every sum `p^(1)_{j1} + ... + p^(k)_{jk}` in non-decreasing
/// order, one entry per index tuple.
///
/// A tuple is generated only from the tuple obtained by decrementing its last
/// non-zero coordinate, so each tuple enters the frontier exactly once.
pub fn compose_sequences<'a>(seqs: Vec<WeightSequence<'a>>) -> Result<WeightSequence<'a>> {
    compose_sequences_guarded(seqs, DEFAULT_FRONTIER_GUARD)
}

pub fn compose_sequences_guarded<'a>(
    seqs: Vec<WeightSequence<'a>>,
    guard: usize,
) -> Result<WeightSequence<'a>> {
    if seqs.is_empty() {
        return Err(Error::EmptyList);
    }
    if seqs.len() == 1 {
        return Ok(seqs.into_iter().next().unwrap());
    }
    let mut composer = Composer {
        inputs: seqs
            .into_iter()
            .map(|source| Memo {
                source,
                values: Vec::new(),
                done: false,
            })
            .collect(),
        heap: BinaryHeap::new(),
        guard,
        outcome: Outcome::default(),
    };
    let origin = vec![0u32; composer.inputs.len()];
    if let Some(sum) = composer.tuple_sum(&origin) {
        composer.heap.push(Reverse((Key(sum), origin)));
    }
    let outcome = composer.outcome.clone();
    Ok(WeightSequence::with_outcome(
        composer.map(|w| (w, None)),
        outcome,
    ))
}

struct Composer<'a> {
    inputs: Vec<Memo<'a>>,
    heap: BinaryHeap<Reverse<(Key, Vec<u32>)>>,
    guard: usize,
    outcome: Outcome,
}

impl Composer<'_> {
    fn tuple_sum(&mut self, tuple: &[u32]) -> Option<f64> {
        let mut total = 0.0;
        for (memo, &j) in self.inputs.iter_mut().zip(tuple) {
            total += memo.get(j as usize)?;
        }
        Some(total)
    }
}

impl Iterator for Composer<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let Reverse((Key(w), tuple)) = self.heap.pop()?;
        let last = tuple.iter().rposition(|&j| j > 0).unwrap_or(0);
        for i in last..tuple.len() {
            if self.heap.len() >= self.guard {
                // Frontier is full: stop here rather than emit out of order.
                self.heap.clear();
                let _ = self.outcome.set(Error::GuardExceeded {
                    what: "composition frontier",
                    limit: self.guard,
                });
                break;
            }
            let mut child = tuple.clone();
            child[i] += 1;
            if let Some(sum) = self.tuple_sum(&child) {
                self.heap.push(Reverse((Key(sum), child)));
            }
        }
        Some(w)
    }
}

/// Lazy k-way merge keeping duplicates; ties go to the earlier input.
pub fn union_sequences<'a>(seqs: Vec<WeightSequence<'a>>) -> Result<WeightSequence<'a>> {
    if seqs.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut inputs = seqs;
    let mut heap = BinaryHeap::new();
    for (i, s) in inputs.iter_mut().enumerate() {
        if let Some(w) = s.next_weight() {
            heap.push(Reverse((Key(w), i)));
        }
    }
    Ok(WeightSequence::from_weights(Merger { inputs, heap }))
}

struct Merger<'a> {
    inputs: Vec<WeightSequence<'a>>,
    heap: BinaryHeap<Reverse<(Key, usize)>>,
}

impl Iterator for Merger<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let Reverse((Key(w), i)) = self.heap.pop()?;
        if let Some(next) = self.inputs[i].next_weight() {
            self.heap.push(Reverse((Key(next), i)));
        }
        Some(w)
    }
}
