//! One pass of large-cluster recovery: partition, size estimate, then repeated
//! ball-around-a-center candidates until one survives the purity test.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::stream_rng;
use crate::sbm::DerivedParams;
use crate::spectral::{top_left_singular_basis, SubspaceOptions};

use super::estimate::{estimate_size_with, ESTIMATE_STREAM};
use super::identify::{identify_cluster, passes_purity_test};
use super::partition::{preprocess_with, PartitionSizes, PARTITION_STREAM};
use super::{FourWayPartition, Profile, RecoveryConfig, SizeEstimate, VoteScale};

const CENTER_STREAM: u64 = 3;
const SVD_STREAM: u64 = 4;

/// Everything that went into a successful round.
#[derive(Clone, Debug)]
pub struct CandidateCluster {
    pub center: usize,
    /// Ball around the center's projection, inside `Y2`.
    pub s_set: VertexSet,
    /// Vote of `W` against `s_set`.
    pub t1: VertexSet,
    /// Vote of `U` against `t1`.
    pub t2: VertexSet,
    pub merged: VertexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterStatus {
    Found,
    /// The size estimate fell below `s_bar / 3`.
    SizeGateRejected,
    /// Every center round was tried without a candidate passing.
    RoundsExhausted,
    /// Too few vertices, or a partition cell stayed empty.
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTrace {
    pub center: usize,
    pub s_size: usize,
    pub t1_size: Option<usize>,
    pub verdict: &'static str,
    pub reason: Option<String>,
}

/// Per-call record, serialised into run reports.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterTrace {
    pub seed: u64,
    pub profile: Profile,
    pub n: usize,
    pub partition: Option<PartitionSizes>,
    pub s_prime: Option<f64>,
    pub s_bar: Option<f64>,
    pub accepted: bool,
    pub k_prime: Option<usize>,
    pub radius: Option<f64>,
    pub svd_iterations: Option<usize>,
    pub rounds: Vec<RoundTrace>,
    pub status: ClusterStatus,
    pub recovered_size: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ClusterOutcome {
    pub status: ClusterStatus,
    pub candidate: Option<CandidateCluster>,
    pub estimate: Option<SizeEstimate>,
    pub partition: Option<FourWayPartition>,
    pub trace: ClusterTrace,
}

impl ClusterOutcome {
    pub fn cluster(&self) -> Option<&VertexSet> {
        self.candidate.as_ref().map(|c| &c.merged)
    }
}

/// Tries to recover one large cluster of `graph` exactly.
pub fn cluster_once(graph: &Graph, p: f64, q: f64, cfg: &RecoveryConfig) -> Result<ClusterOutcome> {
    cfg.validate()?;
    if !(p > q) || !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidConfig(format!("need 0 <= q < p <= 1, got p={p}, q={q}")));
    }
    let n = graph.n();
    let mut trace = ClusterTrace {
        seed: cfg.seed,
        profile: cfg.profile,
        n,
        partition: None,
        s_prime: None,
        s_bar: None,
        accepted: false,
        k_prime: None,
        radius: None,
        svd_iterations: None,
        rounds: Vec::new(),
        status: ClusterStatus::Degenerate,
        recovered_size: None,
    };
    let stop = |status, trace: ClusterTrace, estimate, partition| ClusterOutcome {
        status,
        candidate: None,
        estimate,
        partition,
        trace: ClusterTrace { status, ..trace },
    };

    if n < 8 {
        return Ok(stop(ClusterStatus::Degenerate, trace, None, None));
    }
    let pre = match preprocess_with(graph, &mut stream_rng(cfg.seed, PARTITION_STREAM)) {
        Ok(pre) => pre,
        Err(Error::DegeneratePartition(_)) => {
            return Ok(stop(ClusterStatus::Degenerate, trace, None, None))
        }
        Err(e) => return Err(e),
    };
    let part = pre.partition;
    trace.partition = Some(part.sizes());

    let est = estimate_size_with(
        graph,
        &part,
        p,
        q,
        cfg,
        &mut stream_rng(cfg.seed, ESTIMATE_STREAM),
    )?;
    trace.s_prime = Some(est.s_prime);
    trace.s_bar = Some(est.s_bar);
    trace.accepted = est.accepted;
    if !est.accepted {
        return Ok(stop(ClusterStatus::SizeGateRejected, trace, Some(est), Some(part)));
    }
    let s_prime = est.s_prime;

    let params = DerivedParams::new(n, p, q, cfg.c_size);
    let max_k = part.z.len().min(part.y1.len());
    let k_prime = cfg.k_prime_override.unwrap_or(params.k_prime).clamp(1, max_k);
    trace.k_prime = Some(k_prime);
    let opts = SubspaceOptions {
        tol: cfg.svd_tol,
        oversampling: 8,
        max_iterations: cfg.svd_max_iterations,
        seed: crate::rng::round_seed(cfg.seed, SVD_STREAM),
    };
    let basis = top_left_singular_basis(&pre.a_hat, k_prime, opts)?;
    trace.svd_iterations = Some(basis.iterations());
    let coords = basis.coordinates_of_columns(pre.b_hat.entries())?;
    let y2 = pre.b_hat.cols().to_vec();

    let radius = params.separation(s_prime, cfg.epsilon) * cfg.radius_factor;
    trace.radius = Some(radius);
    let th = &cfg.thresholds;
    let u_set = part.u();

    let mut order: Vec<usize> = (0..y2.len()).collect();
    order.shuffle(&mut stream_rng(cfg.seed, CENTER_STREAM));
    order.truncate(cfg.budget(n));

    for &ci in &order {
        let center = y2[ci];
        let cu = coords.column(ci);
        let mut s_set = VertexSet::empty(n);
        for (j, &v) in y2.iter().enumerate() {
            if (coords.column(j) - cu).norm() <= radius {
                s_set.insert(v);
            }
        }
        let mut round = RoundTrace {
            center,
            s_size: s_set.len(),
            t1_size: None,
            verdict: "skipped",
            reason: Some("ball too small".into()),
        };
        if (s_set.len() as f64) < s_prime * th.s_fraction_big {
            trace.rounds.push(round);
            continue;
        }
        let vote_ref = match th.vote_scale {
            VoteScale::SizeEstimate => s_prime,
            VoteScale::BallSize => s_set.len() as f64,
        };
        let t1 = identify_cluster(graph, &s_set, &part.w, vote_ref, p, q, th.vote_fraction)?;
        round.t1_size = Some(t1.len());
        match passes_purity_test(graph, &t1, &part.w, s_prime, p, q, th)? {
            Err(failure) => {
                round.verdict = "rejected";
                round.reason = Some(failure.reason().into());
                trace.rounds.push(round);
            }
            Ok(()) => {
                let t2 = identify_cluster(
                    graph,
                    &t1,
                    &u_set,
                    t1.len() as f64,
                    p,
                    q,
                    th.refine_vote_fraction,
                )?;
                let merged = t1.union(&t2);
                if cfg.verify_merged {
                    let all = VertexSet::full(n);
                    if let Err(failure) = passes_purity_test(graph, &merged, &all, s_prime, p, q, th)? {
                        round.verdict = "rejected";
                        round.reason = Some(format!("merged set: {}", failure.reason()));
                        trace.rounds.push(round);
                        continue;
                    }
                }
                round.verdict = "accepted";
                round.reason = None;
                trace.rounds.push(round);
                trace.recovered_size = Some(merged.len());
                trace.status = ClusterStatus::Found;
                return Ok(ClusterOutcome {
                    status: ClusterStatus::Found,
                    candidate: Some(CandidateCluster {
                        center,
                        s_set,
                        t1,
                        t2,
                        merged,
                    }),
                    estimate: Some(est),
                    partition: Some(part),
                    trace,
                });
            }
        }
    }
    Ok(stop(ClusterStatus::RoundsExhausted, trace, Some(est), Some(part)))
}
