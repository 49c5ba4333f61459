use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::stream_rng;
use crate::sbm::DerivedParams;

use super::{FourWayPartition, RecoveryConfig};

pub(crate) const ESTIMATE_STREAM: u64 = 2;

/// Estimate `s'` of roughly half the largest cluster size, and the `s_bar / 3` gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SizeEstimate {
    pub s_prime: f64,
    pub s_bar: f64,
    pub accepted: bool,
    /// Sampled vertex attaining the largest `N_W`.
    pub witness: usize,
    pub samples: usize,
}

pub fn estimate_size(
    graph: &Graph,
    part: &FourWayPartition,
    p: f64,
    q: f64,
    cfg: &RecoveryConfig,
) -> Result<SizeEstimate> {
    let mut rng = stream_rng(cfg.seed, ESTIMATE_STREAM);
    estimate_size_with(graph, part, p, q, cfg, &mut rng)
}

pub(crate) fn estimate_size_with<R: Rng>(
    graph: &Graph,
    part: &FourWayPartition,
    p: f64,
    q: f64,
    cfg: &RecoveryConfig,
    rng: &mut R,
) -> Result<SizeEstimate> {
    if !(p > q) {
        return Err(Error::InvalidConfig(format!("need p > q, got p={p}, q={q}")));
    }
    let y2 = part.y2.to_vec();
    if y2.is_empty() || part.w.is_empty() {
        return Err(Error::InvalidConfig("Y2 and W must be non-empty".into()));
    }
    let n = graph.n();
    let samples = cfg.budget(n);
    let (mut best, mut witness) = (0usize, y2[0]);
    for i in 0..samples {
        let u = y2[rng.random_range(0..y2.len())];
        let c = graph.neighbor_count_unchecked(u, &part.w);
        if i == 0 || c > best {
            best = c;
            witness = u;
        }
    }
    let s_prime = (best as f64 - q * part.w.len() as f64) / (p - q);
    let s_bar = DerivedParams::new(n, p, q, cfg.c_size).s_bar;
    Ok(SizeEstimate {
        s_prime,
        s_bar,
        accepted: s_prime > s_bar / 3.0,
        witness,
        samples,
    })
}
