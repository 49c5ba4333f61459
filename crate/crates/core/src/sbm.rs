//! Planted-partition (stochastic block model) instances.
//!
//! Vertices are laid out in contiguous blocks following the size table sorted
//! in non-increasing order, so cluster `0` is always a largest cluster.
//! Edges are drawn pair by pair in lexicographic order `(0,1), (0,2), …, (n-2,n-1)`
//! from a `ChaCha8Rng` seeded with [`SbmSpec::seed`]; one uniform `f64` is consumed
//! per pair, which keeps a seed portable to any implementation of the same stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Parameters of one planted-partition instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub cluster_sizes: Vec<usize>,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
}

impl SbmSpec {
    /// Validates the parameters and sorts the size table (stable, non-increasing).
    ///
    /// `p == q` is accepted: it describes the Erdős–Rényi null model, which is useful
    /// for calibration even though no recovery is possible on it.
    pub fn new(mut cluster_sizes: Vec<usize>, p: f64, q: f64, seed: u64) -> Result<Self> {
        let total = cluster_sizes.iter().try_fold(0usize, |a, &b| a.checked_add(b));
        match total {
            None => return Err(Error::InvalidSpec("cluster sizes overflow".into())),
            Some(0) => return Err(Error::InvalidSpec("cluster sizes sum to zero".into())),
            Some(_) => {}
        }
        if cluster_sizes.contains(&0) {
            return Err(Error::InvalidSpec("cluster sizes must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidSpec(format!("probabilities out of [0,1]: p={p}, q={q}")));
        }
        if p < q {
            return Err(Error::InvalidSpec(format!("need q <= p, got p={p}, q={q}")));
        }
        cluster_sizes.sort_by(|a, b| b.cmp(a));
        Ok(Self {
            cluster_sizes,
            p,
            q,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn s_max(&self) -> usize {
        self.cluster_sizes[0]
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    /// Block-contiguous ground truth for this size table.
    pub fn ground_truth(&self) -> GroundTruth {
        let labels = self
            .cluster_sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect();
        GroundTruth::from_labels(labels).expect("sizes are positive")
    }
}

/// Hidden partition of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl GroundTruth {
    /// Labels must use every index in `0..k` at least once.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSpec(format!("cluster label {i} is unused")));
        }
        Ok(Self { labels, sizes })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cluster(&self, i: usize) -> VertexSet {
        let mut s = VertexSet::empty(self.n());
        for (v, &l) in self.labels.iter().enumerate() {
            if l == i {
                s.insert(v);
            }
        }
        s
    }

    pub fn clusters(&self) -> Vec<VertexSet> {
        (0..self.k()).map(|i| self.cluster(i)).collect()
    }

    /// Restriction to the vertices listed in `map` (new id → old id). Clusters that
    /// vanish are dropped and the remaining labels compacted, preserving their order.
    pub fn restrict(&self, map: &[usize]) -> GroundTruth {
        let mut kept = vec![false; self.k()];
        for &old in map {
            kept[self.labels[old]] = true;
        }
        let mut relabel = vec![usize::MAX; self.k()];
        let mut next = 0;
        for (l, _) in kept.iter().enumerate().filter(|(_, &k)| k) {
            relabel[l] = next;
            next += 1;
        }
        let labels = map.iter().map(|&old| relabel[self.labels[old]]).collect();
        GroundTruth::from_labels(labels).expect("every kept label is used")
    }
}

/// Quantities derived from `(n, p, q)` that parameterise the recovery algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// `max(sqrt(p(1-p)), sqrt(q(1-q)))`
    pub sigma: f64,
    /// Size threshold `c_size * sqrt(p(1-q) n) * ln n / (p - q)`.
    pub s_bar: f64,
    /// Projection dimension before clamping to the matrix shape.
    pub k_prime: usize,
}

impl DerivedParams {
    pub fn new(n: usize, p: f64, q: f64, c_size: f64) -> Self {
        let nf = n as f64;
        let sigma = (p * (1.0 - p)).sqrt().max((q * (1.0 - q)).sqrt());
        let s_bar = c_size * (p * (1.0 - q) * nf).sqrt() * nf.ln() / (p - q);
        Self {
            n,
            p,
            q,
            sigma,
            s_bar,
            k_prime: k_prime(n, p, q),
        }
    }

    /// Separation radius `sqrt(2 eps) (p - q) sqrt(s')`; with `eps = 0.002` this is
    /// `sqrt(0.004) (p - q) sqrt(s')`.
    pub fn separation(&self, s_prime: f64, epsilon: f64) -> f64 {
        (2.0 * epsilon).sqrt() * (self.p - self.q) * s_prime.max(0.0).sqrt()
    }
}

/// `max(1, round((p - q) sqrt(n) / sqrt(p (1 - q))))`.
pub fn k_prime(n: usize, p: f64, q: f64) -> usize {
    let denom = (p * (1.0 - q)).sqrt();
    if denom == 0.0 {
        return 1;
    }
    let raw = (p - q) * (n as f64).sqrt() / denom;
    (raw.round() as usize).max(1)
}

/// Draws one graph from the planted partition described by `spec`.
pub fn sample_sbm(spec: &SbmSpec) -> Result<(Graph, GroundTruth)> {
    let spec = SbmSpec::new(spec.cluster_sizes.clone(), spec.p, spec.q, spec.seed)?;
    let truth = spec.ground_truth();
    let n = truth.n();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = Graph::empty(n);
    let labels = truth.labels();
    for u in 0..n {
        for v in u + 1..n {
            let prob = if labels[u] == labels[v] { spec.p } else { spec.q };
            let r: f64 = rng.random();
            if r < prob {
                g.set_edge(u, v);
            }
        }
    }
    Ok((g, truth))
}

/// Removes `removed` from both the graph and its ground truth. The returned map sends
/// new vertex ids to the ids in the input graph.
pub fn remove_vertices(
    graph: &Graph,
    truth: &GroundTruth,
    removed: &VertexSet,
) -> (Graph, GroundTruth, Vec<usize>) {
    let (g, map) = graph.remove_vertices(removed);
    let t = truth.restrict(&map);
    (g, t, map)
}
