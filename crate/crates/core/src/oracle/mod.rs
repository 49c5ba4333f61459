//! Same-cluster oracle with persistent noise, and clustering through it.
//!
//! An answer is a pure function of `(seed, min(u, v), max(u, v))`, so repeating a
//! query can never change its answer and no table of past answers is kept. The
//! only mutable state is the accounting: a running total and a bitset over
//! unordered pairs for the distinct count.

mod noisy;

pub use noisy::{noisy_clustering, NoisyConfig, NoisyOutcome, QueryStats};

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::mix64;
use crate::sbm::GroundTruth;

pub struct FaultyOracle {
    truth: GroundTruth,
    delta: f64,
    seed: u64,
    total: AtomicU64,
    distinct: AtomicU64,
    touched: Vec<AtomicU64>,
    transcript: Option<Mutex<Box<dyn Write + Send>>>,
}

impl std::fmt::Debug for FaultyOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FaultyOracle")
            .field("n", &self.n())
            .field("delta", &self.delta)
            .field("seed", &self.seed)
            .field("total", &self.total_queries())
            .field("distinct", &self.distinct_queries())
            .finish()
    }
}

fn pair_index(a: usize, b: usize) -> u64 {
    // a < b
    (b as u64) * (b as u64 - 1) / 2 + a as u64
}

impl FaultyOracle {
    /// `delta` must lie in `(0, 1]`; `delta = 1` is a noiseless oracle.
    pub fn new(truth: GroundTruth, delta: f64, seed: u64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidConfig(format!("delta = {delta} is not in (0, 1]")));
        }
        let n = truth.n() as u64;
        let pairs = n * n.saturating_sub(1) / 2;
        let words = pairs.div_ceil(64) as usize;
        Ok(Self {
            truth,
            delta,
            seed,
            total: AtomicU64::new(0),
            distinct: AtomicU64::new(0),
            touched: (0..words).map(|_| AtomicU64::new(0)).collect(),
            transcript: None,
        })
    }

    /// Streams every query as a `u v answer` line (`+` or `-`).
    pub fn with_transcript(mut self, sink: Box<dyn Write + Send>) -> Self {
        self.transcript = Some(Mutex::new(sink));
        self
    }

    pub fn n(&self) -> usize {
        self.truth.n()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Probability that a same-cluster pair is answered `+`; `(1 + delta) / 2`.
    pub fn p(&self) -> f64 {
        (1.0 + self.delta) / 2.0
    }

    pub fn q(&self) -> f64 {
        (1.0 - self.delta) / 2.0
    }

    pub fn truth(&self) -> &GroundTruth {
        &self.truth
    }

    pub fn total_queries(&self) -> u64 {
        self.total.load(Ordering::Relaxed)
    }

    pub fn distinct_queries(&self) -> u64 {
        self.distinct.load(Ordering::Relaxed)
    }

    /// The answer for a pair without touching the counters.
    pub fn peek(&self, u: usize, v: usize) -> Result<bool> {
        let (a, b) = self.check(u, v)?;
        Ok(self.answer(a, b))
    }

    /// `true` means `+` ("same cluster").
    pub fn query(&self, u: usize, v: usize) -> Result<bool> {
        let (a, b) = self.check(u, v)?;
        let idx = pair_index(a, b);
        let bit = 1u64 << (idx % 64);
        let prev = self.touched[(idx / 64) as usize].fetch_or(bit, Ordering::Relaxed);
        if prev & bit == 0 {
            self.distinct.fetch_add(1, Ordering::Relaxed);
        }
        self.total.fetch_add(1, Ordering::Relaxed);
        let ans = self.answer(a, b);
        if let Some(t) = &self.transcript {
            let mut w = t.lock().unwrap_or_else(|e| e.into_inner());
            writeln!(w, "{u} {v} {}", if ans { '+' } else { '-' })?;
        }
        Ok(ans)
    }

    /// Queries every pair of `vertices` and returns the graph of `+` answers,
    /// indexed by position in `vertices`.
    pub fn positive_graph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.query(u, v)? {
                    g.set_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn flush_transcript(&self) -> Result<()> {
        if let Some(t) = &self.transcript {
            t.lock().unwrap_or_else(|e| e.into_inner()).flush()?;
        }
        Ok(())
    }

    fn check(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfQuery(u));
        }
        Ok((u.min(v), u.max(v)))
    }

    fn answer(&self, a: usize, b: usize) -> bool {
        let r = mix64(self.seed ^ mix64(pair_index(a, b)));
        let x = (r >> 11) as f64 / (1u64 << 53) as f64;
        let prob = if self.truth.label(a) == self.truth.label(b) {
            self.p()
        } else {
            self.q()
        };
        x < prob
    }
}
