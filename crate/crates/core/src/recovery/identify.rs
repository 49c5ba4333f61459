use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::Thresholds;

/// Members `v` of `candidates` with `N_S(v) >= q|S| + (p - q) * s_ref * fraction`.
pub fn identify_cluster(
    graph: &Graph,
    seeds: &VertexSet,
    candidates: &VertexSet,
    s_ref: f64,
    p: f64,
    q: f64,
    fraction: f64,
) -> Result<VertexSet> {
    if let Some(v) = seeds.intersection(candidates).iter().next() {
        return Err(Error::OverlappingSets(v));
    }
    let mut out = VertexSet::empty(graph.n());
    if seeds.is_empty() {
        return Ok(out);
    }
    let cut = q * seeds.len() as f64 + (p - q) * s_ref * fraction;
    for v in candidates.iter() {
        if graph.neighbor_count_unchecked(v, seeds) as f64 >= cut {
            out.insert(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", content = "vertex", rename_all = "snake_case")]
pub enum PurityFailure {
    TooSmall,
    LowInternalDegree(usize),
    HighExternalDegree(usize),
}

impl PurityFailure {
    pub fn reason(&self) -> &'static str {
        match self {
            PurityFailure::TooSmall => "too small",
            PurityFailure::LowInternalDegree(_) => "low internal degree",
            PurityFailure::HighExternalDegree(_) => "high external degree",
        }
    }
}

impl std::fmt::Display for PurityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.reason())
    }
}

/// Checks that `t1` looks like `V_i ∩ W` for a single cluster: large enough, every
/// member has high degree into `t1`, and no other vertex of `w` does.
pub fn passes_purity_test(
    graph: &Graph,
    t1: &VertexSet,
    w: &VertexSet,
    s_prime: f64,
    p: f64,
    q: f64,
    thresholds: &Thresholds,
) -> Result<std::result::Result<(), PurityFailure>> {
    if !t1.is_subset(w) {
        return Err(Error::InvalidConfig("T1 must be a subset of W".into()));
    }
    let size = t1.len();
    if size == 0 || size as f64 <= s_prime * thresholds.t1_min_fraction {
        return Ok(Err(PurityFailure::TooSmall));
    }
    let (a, b) = thresholds.purity_mix;
    let cut = (a * p + b * q) * size as f64;
    for v in t1.iter() {
        if graph.neighbor_count_unchecked(v, t1) as f64 <= cut {
            return Ok(Err(PurityFailure::LowInternalDegree(v)));
        }
    }
    for v in w.difference(t1).iter() {
        if graph.neighbor_count_unchecked(v, t1) as f64 >= cut {
            return Ok(Err(PurityFailure::HighExternalDegree(v)));
        }
    }
    Ok(Ok(()))
}
