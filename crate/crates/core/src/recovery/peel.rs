use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::rng::round_seed;

use super::{cluster_once, ClusterStatus, ClusterTrace, RecoveryConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeelStop {
    /// The last call returned no cluster; its status says why.
    NoCluster(ClusterStatus),
    MaxRounds,
    /// Every vertex was assigned to a recovered cluster.
    Exhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeelOutcome {
    /// Recovered clusters in order of discovery, as sorted original vertex ids.
    pub clusters: Vec<Vec<usize>>,
    pub traces: Vec<ClusterTrace>,
    pub stop: PeelStop,
}

/// Repeatedly recovers one cluster, deletes it and recurses on the induced residual graph.
pub fn recursive_cluster(graph: &Graph, p: f64, q: f64, cfg: &RecoveryConfig) -> Result<PeelOutcome> {
    let mut current = graph.clone();
    // current id -> original id
    let mut ids: Vec<usize> = (0..graph.n()).collect();
    let mut clusters = Vec::new();
    let mut traces = Vec::new();
    for round in 0..cfg.max_peel_rounds {
        if current.n() == 0 {
            return Ok(PeelOutcome {
                clusters,
                traces,
                stop: PeelStop::Exhausted,
            });
        }
        let round_cfg = cfg.with_seed(round_seed(cfg.seed, round as u64));
        let outcome = cluster_once(&current, p, q, &round_cfg)?;
        traces.push(outcome.trace.clone());
        let Some(found) = outcome.cluster() else {
            return Ok(PeelOutcome {
                clusters,
                traces,
                stop: PeelStop::NoCluster(outcome.status),
            });
        };
        clusters.push(found.iter().map(|v| ids[v]).collect());
        let (next, map) = current.remove_vertices(found);
        ids = map.into_iter().map(|v| ids[v]).collect();
        current = next;
    }
    Ok(PeelOutcome {
        clusters,
        traces,
        stop: PeelStop::MaxRounds,
    })
}
