//! Markov chains and their conversion to weighted digraphs.
//!
//! A transition of probability `p < 1` becomes an edge of weight `-ln p`, so
//! the weight of a path is the negative log of its probability. States whose
//! only transition has probability 1 are merged into their successor first.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedDigraph};

/// Absolute tolerance on row sums and on entries slightly above 1.
pub const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Stochastic,
    SubStochastic,
}

#[derive(Debug, Clone)]
pub struct MarkovChain {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    kinds: Vec<RowKind>,
}

impl MarkovChain {
    /// Validates a square matrix of transition probabilities. State names
    /// default to `"0"`, `"1"`, ...
    pub fn new(rows: Vec<Vec<f64>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        let names = match names {
            Some(names) if names.len() != n => {
                return Err(Error::InvalidMatrix(format!(
                    "{} state names for {} rows",
                    names.len(),
                    n
                )))
            }
            Some(names) => names,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut clean = Vec::with_capacity(n);
        let mut kinds = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(n);
            for (j, p) in row.into_iter().enumerate() {
                if !p.is_finite() || !(0.0..=1.0 + ROW_TOLERANCE).contains(&p) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) = {p} is not a probability"
                    )));
                }
                out.push(p.min(1.0));
            }
            let sum: f64 = out.iter().sum();
            let kind = if (sum - 1.0).abs() <= ROW_TOLERANCE {
                RowKind::Stochastic
            } else if sum < 1.0 {
                RowKind::SubStochastic
            } else {
                return Err(Error::InvalidMatrix(format!("row {i} sums to {sum} > 1")));
            };
            clean.push(out);
            kinds.push(kind);
        }
        Ok(Self {
            names,
            rows: clean,
            kinds,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn row_kinds(&self) -> &[RowKind] {
        &self.kinds
    }

    pub fn is_stochastic(&self) -> bool {
        self.kinds.iter().all(|k| *k == RowKind::Stochastic)
    }
}

/// Parses a comma-separated square matrix, one row per line. A first line
/// that does not parse as numbers is taken as a header of state names.
pub fn parse_markov_csv(text: &str) -> Result<MarkovChain> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::InvalidMatrix("empty input".into()));
    }
    let split = |l: &str| -> Vec<String> { l.split(',').map(|f| f.trim().to_string()).collect() };
    let parse_row = |l: &str| -> Option<Vec<f64>> {
        split(l).iter().map(|f| f.parse::<f64>().ok()).collect()
    };

    let (names, body) = match parse_row(lines[0]) {
        Some(_) => (None, &lines[..]),
        None => (Some(split(lines[0])), &lines[1..]),
    };
    let mut rows = Vec::with_capacity(body.len());
    for (i, line) in body.iter().enumerate() {
        let row = parse_row(line)
            .ok_or_else(|| Error::InvalidMatrix(format!("row {i} is not numeric: {line:?}")))?;
        rows.push(row);
    }
    MarkovChain::new(rows, names)
}

/// Converted graph together with the bookkeeping that relates it back to the
/// chain.
#[derive(Debug, Clone)]
pub struct MarkovGraph {
    pub graph: WeightedDigraph,
    /// For every state, the graph vertex it was merged into (itself if it
    /// survived).
    pub representative: Vec<usize>,
    /// Graph vertex of each surviving state.
    pub vertex_of: Vec<Option<usize>>,
    /// Edge carrying each transition `(i, j)` with `0 < p_ij < 1`.
    pub transition_edge: BTreeMap<(usize, usize), EdgeId>,
}

pub fn from_markov(chain: &MarkovChain) -> Result<WeightedDigraph> {
    Ok(from_markov_with_map(chain)?.graph)
}

pub fn from_markov_with_map(chain: &MarkovChain) -> Result<MarkovGraph> {
    let n = chain.len();
    let certain: Vec<Option<usize>> = (0..n)
        .map(|i| (0..n).find(|&j| chain.prob(i, j) == 1.0))
        .collect();

    // Merge, in state order, every state whose only move is certain.
    let mut rep: Vec<usize> = (0..n).collect();
    for (i, &c) in certain.iter().enumerate() {
        let Some(j) = c else { continue };
        let target = rep[j];
        if target == i {
            return Err(Error::ProbabilityOneCycle(chain.names()[i].clone()));
        }
        for r in rep.iter_mut() {
            if *r == i {
                *r = target;
            }
        }
    }

    let mut vertex_of = vec![None; n];
    let mut names = Vec::new();
    for i in 0..n {
        if rep[i] == i {
            vertex_of[i] = Some(names.len());
            names.push(chain.names()[i].clone());
        }
    }
    let mut triples = Vec::new();
    let mut transition_edge = BTreeMap::new();
    for i in 0..n {
        let Some(src) = vertex_of[i] else { continue };
        for j in 0..n {
            let p = chain.prob(i, j);
            if p > 0.0 && p < 1.0 {
                let dst = vertex_of[rep[j]].expect("representatives survive");
                transition_edge.insert((i, j), triples.len());
                triples.push((src, dst, -p.ln()));
            }
        }
    }
    let graph = WeightedDigraph::new(names, triples)?;
    Ok(MarkovGraph {
        graph,
        representative: rep,
        vertex_of,
        transition_edge,
    })
}
