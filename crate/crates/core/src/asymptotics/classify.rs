//! Classification of the weight sequence of `X(v1, v2)`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::class::{ln_factorial, log_add, AsymptoticClass};
use super::spectral::{cycle_rate, solve_log_rate};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedDigraph};
use crate::structure::{
    count_variants, fold_variants, relevant_vertices, scc_decompose, ItineraryVariant,
    SccDecomposition, VariantMeasure,
};

/// Per-component facts on `vt(X)`.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub index: usize,
    pub vertices: Vec<String>,
    pub is_cycle: bool,
    pub period: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_rate: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub scc: SccDecomposition,
    pub relevant: BTreeSet<VertexId>,
    pub components: Vec<ComponentSummary>,
    pub class: AsymptoticClass,
}

pub fn classify(g: &WeightedDigraph, v1: VertexId, v2: VertexId) -> Result<AsymptoticClass> {
    analyze(g, v1, v2).map(|a| a.class)
}

/// Classifies `X(v1, v2)` and records the component facts that justify the
/// answer.
pub fn analyze(g: &WeightedDigraph, v1: VertexId, v2: VertexId) -> Result<Analysis> {
    let relevant = relevant_vertices(g, v1, v2)?;
    if relevant.is_empty() {
        return Err(Error::NoPath {
            from: g.name(v1).to_string(),
            to: g.name(v2).to_string(),
        });
    }
    let scc = scc_decompose(g);
    let on_paths: BTreeSet<usize> = relevant
        .iter()
        .map(|&v| scc.component_of(v))
        .filter(|&c| scc.component(c).nontrivial)
        .collect();

    let mut components = Vec::with_capacity(on_paths.len());
    for &c in &on_paths {
        let comp = scc.component(c);
        let (cycle_weight, log_rate) = if comp.is_cycle {
            (Some(cycle_rate(g, &scc, c)?), None)
        } else {
            (None, Some(solve_log_rate(g, &scc, c)?))
        };
        components.push(ComponentSummary {
            index: c,
            vertices: comp.vertices.iter().map(|&v| g.name(v).to_string()).collect(),
            is_cycle: comp.is_cycle,
            period: comp.period.expect("non-trivial component has a period"),
            cycle_weight,
            log_rate,
        });
    }

    let class = if components.is_empty() {
        AsymptoticClass::Finite {
            count: count_variants(g, &scc, v1, v2)?,
        }
    } else if components.iter().all(|c| c.is_cycle) {
        let (c, s) = polynomial_rate_dp(g, &scc, v1, v2)?;
        AsymptoticClass::Polynomial { c, s }
    } else {
        let s = components
            .iter()
            .filter_map(|c| c.log_rate)
            .fold(f64::INFINITY, f64::min);
        AsymptoticClass::Logarithmic { s }
    };

    Ok(Analysis {
        scc,
        relevant,
        components,
        class,
    })
}

/// `(c, s)` from an explicit variant list: `c` is the largest dwell count and
/// `s` the equal-degree union over the variants attaining it of
/// `c! * Π w0`, one cycle weight per dwelled component.
pub fn polynomial_rate(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    variants: &[ItineraryVariant],
) -> Result<(u32, f64)> {
    let c = variants.iter().map(|v| v.dwell_count()).max().unwrap_or(0);
    if c == 0 {
        return Err(Error::NoDwell);
    }
    let mut log_inv_sum = f64::NEG_INFINITY;
    for v in variants.iter().filter(|v| v.dwell_count() == c) {
        let mut ln_s = ln_factorial(c as u32);
        for comp in v.dwelled_components() {
            ln_s += cycle_rate(g, scc, comp)?.ln();
        }
        log_inv_sum = log_add(log_inv_sum, -ln_s);
    }
    Ok((c as u32, (-log_inv_sum).exp()))
}

/// Max dwell count over a variant set, and `ln Σ Π 1/w0` over the variants
/// attaining it.
#[derive(Debug, Clone, Copy)]
struct DwellMeasure {
    degree: Option<u32>,
    log_sum: f64,
}

impl VariantMeasure for DwellMeasure {
    fn zero() -> Self {
        Self {
            degree: None,
            log_sum: f64::NEG_INFINITY,
        }
    }

    fn unit() -> Self {
        Self {
            degree: Some(0),
            log_sum: 0.0,
        }
    }

    fn plus(self, other: Self) -> Self {
        match (self.degree, other.degree) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) if a > b => self,
            (Some(a), Some(b)) if a < b => other,
            _ => Self {
                degree: self.degree,
                log_sum: log_add(self.log_sum, other.log_sum),
            },
        }
    }

    fn dwell(self, g: &WeightedDigraph, scc: &SccDecomposition, component: usize) -> Self {
        let Some(d) = self.degree else { return self };
        // Only cycle components reach here; see polynomial_rate_dp.
        let w0 = cycle_rate(g, scc, component).expect("cycle component");
        Self {
            degree: Some(d + 1),
            log_sum: self.log_sum - w0.ln(),
        }
    }

    fn edge(self, _: &WeightedDigraph, _: EdgeId) -> Self {
        self
    }
}

/// Same result as [`polynomial_rate`] over the full variant set, by dynamic
/// programming on the condensation instead of listing variants.
pub fn polynomial_rate_dp(
    g: &WeightedDigraph,
    scc: &SccDecomposition,
    v1: VertexId,
    v2: VertexId,
) -> Result<(u32, f64)> {
    let relevant = relevant_vertices(g, v1, v2)?;
    for &v in &relevant {
        let comp = scc.component(scc.component_of(v));
        if comp.nontrivial && !comp.is_cycle {
            return Err(Error::NotACycle);
        }
    }
    let m: DwellMeasure = fold_variants(g, scc, v1, v2)?;
    match m.degree {
        Some(c) if c > 0 => Ok((c, (ln_factorial(c) - m.log_sum).exp())),
        _ => Err(Error::NoDwell),
    }
}
