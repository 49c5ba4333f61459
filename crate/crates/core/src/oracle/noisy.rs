use rand::seq::index::sample;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::recovery::{cluster_once, ClusterStatus, ClusterTrace, Profile, RecoveryConfig};
use crate::rng::{round_seed, stream_rng};

use super::FaultyOracle;

const SAMPLE_STREAM: u64 = 11;
const VOTER_STREAM: u64 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyConfig {
    /// Smallest cluster size the run is meant to recover.
    pub s: usize,
    /// Constant `C` in the sample size `C^2 n^2 ln^2 n / (s^2 delta^2)`.
    pub c_oracle: f64,
    pub recovery: RecoveryConfig,
}

impl NoisyConfig {
    pub fn theory(s: usize, seed: u64) -> Self {
        Self {
            s,
            c_oracle: 8192.0,
            recovery: RecoveryConfig::theory(seed),
        }
    }

    pub fn empirical(s: usize, seed: u64) -> Self {
        Self {
            s,
            c_oracle: 1.0,
            recovery: RecoveryConfig::empirical(seed),
        }
    }

    pub fn for_profile(profile: Profile, s: usize, seed: u64) -> Self {
        match profile {
            Profile::Theory => Self::theory(s, seed),
            Profile::Empirical => Self::empirical(s, seed),
        }
    }

    /// Unclamped sample size `ceil(C^2 n^2 ln^2 n / (s^2 delta^2))`.
    pub fn raw_sample_size(&self, n: usize, delta: f64) -> f64 {
        let (nf, sf) = (n as f64, self.s as f64);
        (self.c_oracle * nf * nf.ln() / (sf * delta)).powi(2).ceil()
    }

    /// Size of the voting subset, `ceil(4 ln n / delta^2)`.
    pub fn vote_size(n: usize, delta: f64) -> usize {
        (4.0 * (n as f64).ln() / (delta * delta)).ceil() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub total: u64,
    pub distinct: u64,
    /// `|T|`.
    pub sample_size: usize,
    /// Voting rounds that ran.
    pub rounds: usize,
    pub vote_size: usize,
    /// `binom(|T|, 2) + rounds * vote_size * n`; `distinct` never exceeds it.
    pub budget_bound: u64,
    /// The requested sample was at least `n`, so every pair of `V` was queried.
    pub budget_exceeds_trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoisyOutcome {
    /// `T_l ∪ C'` for each round, sorted vertex ids.
    pub clusters: Vec<Vec<usize>>,
    pub stats: QueryStats,
    pub traces: Vec<ClusterTrace>,
    /// Status of the last inner call.
    pub last_status: Option<ClusterStatus>,
}

/// Recovers every cluster of size above `cfg.s` by clustering a queried sample and
/// extending each recovered part to the rest of `V` with a majority vote.
pub fn noisy_clustering(
    oracle: &FaultyOracle,
    n: usize,
    delta: f64,
    cfg: &NoisyConfig,
) -> Result<NoisyOutcome> {
    if n != oracle.n() {
        return Err(Error::DimensionMismatch {
            expected: oracle.n(),
            got: n,
        });
    }
    if cfg.s == 0 || cfg.s > n {
        return Err(Error::InvalidConfig(format!("s = {} must lie in 1..={n}", cfg.s)));
    }
    if !(delta > 0.0 && delta <= 1.0) || !(cfg.c_oracle > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "need delta in (0, 1] and C > 0, got delta={delta}, C={}",
            cfg.c_oracle
        )));
    }
    let seed = cfg.recovery.seed;
    let raw = cfg.raw_sample_size(n, delta);
    let exceeds = raw >= n as f64;
    let t_size = if exceeds { n } else { raw as usize };
    let vote_size = NoisyConfig::vote_size(n, delta);
    let (p, q) = ((1.0 + delta) / 2.0, (1.0 - delta) / 2.0);

    let mut sample_ids = sample(&mut stream_rng(seed, SAMPLE_STREAM), n, t_size).into_vec();
    sample_ids.sort_unstable();
    let in_sample = VertexSet::from_vertices(n, sample_ids.iter().copied())?;

    let mut current = oracle.positive_graph(&sample_ids)?;
    // current id -> original id
    let mut ids = sample_ids;
    let mut unassigned = VertexSet::full(n);
    let mut voter_rng = stream_rng(seed, VOTER_STREAM);
    let mut clusters = Vec::new();
    let mut traces = Vec::new();
    let mut last_status = None;
    let mut rounds = 0;

    for round in 0..n / cfg.s {
        if current.n() == 0 {
            break;
        }
        let round_cfg = cfg.recovery.with_seed(round_seed(seed, round as u64));
        let outcome = cluster_once(&current, p, q, &round_cfg)?;
        traces.push(outcome.trace.clone());
        last_status = Some(outcome.status);
        let Some(found) = outcome.cluster() else {
            break;
        };
        rounds += 1;
        let part: Vec<usize> = found.iter().map(|v| ids[v]).collect();
        let mut voters = part.clone();
        voters.shuffle(&mut voter_rng);
        voters.truncate(vote_size.min(part.len()));

        let mut cluster = VertexSet::from_vertices(n, part.iter().copied())?;
        for v in unassigned.difference(&in_sample).iter() {
            let mut plus = 0;
            for &t in &voters {
                plus += oracle.query(v, t)? as usize;
            }
            if 2 * plus >= voters.len() {
                cluster.insert(v);
            }
        }
        unassigned = unassigned.difference(&cluster);
        clusters.push(cluster.to_vec());

        let (next, map) = current.remove_vertices(found);
        ids = map.into_iter().map(|v| ids[v]).collect();
        current = next;
    }

    let t = t_size as u64;
    let stats = QueryStats {
        total: oracle.total_queries(),
        distinct: oracle.distinct_queries(),
        sample_size: t_size,
        rounds,
        vote_size,
        budget_bound: t * t.saturating_sub(1) / 2 + (rounds * vote_size * n) as u64,
        budget_exceeds_trivial: exceeds,
    };
    oracle.flush_transcript()?;
    Ok(NoisyOutcome {
        clusters,
        stats,
        traces,
        last_status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbm::GroundTruth;

    #[test]
    fn sample_and_vote_sizes() {
        let cfg = NoisyConfig::empirical(1200, 0);
        let raw = cfg.raw_sample_size(3000, 0.5);
        let expect = (3000f64 * 3000f64.ln() / 600.0).powi(2).ceil();
        assert_eq!(raw, expect);
        assert_eq!(NoisyConfig::vote_size(3000, 0.5), (16.0 * 3000f64.ln()).ceil() as usize);
    }

    #[test]
    fn noiseless_two_clusters() {
        let mut labels = vec![0; 60];
        labels.extend([1; 40]);
        let truth = GroundTruth::from_labels(labels).unwrap();
        let oracle = FaultyOracle::new(truth.clone(), 1.0, 5).unwrap();
        let out = noisy_clustering(&oracle, 100, 1.0, &NoisyConfig::empirical(40, 2)).unwrap();
        // the sample covers V here, so every pair is queried
        assert!(out.stats.budget_exceeds_trivial);
        assert_eq!(out.stats.sample_size, 100);
        let mut got = out.clusters.clone();
        got.sort();
        let mut want: Vec<Vec<usize>> = truth.clusters().iter().map(|c| c.to_vec()).collect();
        want.sort();
        assert_eq!(got, want);
        assert!(out.stats.distinct <= out.stats.budget_bound);
        assert!(out.stats.distinct <= out.stats.total);
    }

    #[test]
    fn rejects_bad_parameters() {
        let truth = GroundTruth::from_labels(vec![0; 10]).unwrap();
        let o = FaultyOracle::new(truth, 0.5, 0).unwrap();
        assert!(noisy_clustering(&o, 10, 0.5, &NoisyConfig::empirical(0, 0)).is_err());
        assert!(noisy_clustering(&o, 10, 0.5, &NoisyConfig::empirical(11, 0)).is_err());
        assert!(noisy_clustering(&o, 9, 0.5, &NoisyConfig::empirical(5, 0)).is_err());
    }
}
