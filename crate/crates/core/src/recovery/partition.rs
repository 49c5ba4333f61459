use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::stream_rng;
use crate::spectral::{build_biadjacency, BiAdjacency};

use super::RecoveryConfig;

const MAX_ATTEMPTS: usize = 10;
pub(crate) const PARTITION_STREAM: u64 = 1;

/// Random split of the vertex set into `Y1`, `Y2`, `Z` and `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourWayPartition {
    pub y1: VertexSet,
    pub y2: VertexSet,
    pub z: VertexSet,
    pub w: VertexSet,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PartitionSizes {
    pub y1: usize,
    pub y2: usize,
    pub z: usize,
    pub w: usize,
}

impl FourWayPartition {
    /// `Y1 ∪ Y2`
    pub fn y(&self) -> VertexSet {
        self.y1.union(&self.y2)
    }

    /// `Y ∪ Z`, the complement of `W`.
    pub fn u(&self) -> VertexSet {
        self.y().union(&self.z)
    }

    pub fn sizes(&self) -> PartitionSizes {
        PartitionSizes {
            y1: self.y1.len(),
            y2: self.y2.len(),
            z: self.z.len(),
            w: self.w.len(),
        }
    }

    /// Assigns every vertex independently to `Y1, Y2, Z, W` with probabilities
    /// 1/8, 1/8, 1/4, 1/2, redrawing (up to 10 times) while any cell is empty.
    pub fn sample<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        for _ in 0..MAX_ATTEMPTS {
            let mut cells = [
                VertexSet::empty(n),
                VertexSet::empty(n),
                VertexSet::empty(n),
                VertexSet::empty(n),
            ];
            for v in 0..n {
                let cell = match rng.random_range(0..8u32) {
                    0 => 0,
                    1 => 1,
                    2 | 3 => 2,
                    _ => 3,
                };
                cells[cell].insert(v);
            }
            if cells.iter().all(|c| !c.is_empty()) {
                let [y1, y2, z, w] = cells;
                return Ok(Self { y1, y2, z, w });
            }
        }
        Err(Error::DegeneratePartition(MAX_ATTEMPTS))
    }
}

/// Partition plus `Â` (rows `Z`, columns `Y1`) and `B̂` (rows `Z`, columns `Y2`).
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub partition: FourWayPartition,
    pub a_hat: BiAdjacency,
    pub b_hat: BiAdjacency,
}

pub fn preprocess(graph: &Graph, cfg: &RecoveryConfig) -> Result<Preprocessed> {
    let mut rng = stream_rng(cfg.seed, PARTITION_STREAM);
    preprocess_with(graph, &mut rng)
}

pub(crate) fn preprocess_with<R: Rng>(graph: &Graph, rng: &mut R) -> Result<Preprocessed> {
    if graph.n() < 8 {
        return Err(Error::InvalidConfig(format!(
            "preprocessing needs at least 8 vertices, got {}",
            graph.n()
        )));
    }
    let partition = FourWayPartition::sample(graph.n(), rng)?;
    let a_hat = build_biadjacency(graph, &partition.z, &partition.y1)?;
    let b_hat = build_biadjacency(graph, &partition.z, &partition.y2)?;
    Ok(Preprocessed {
        partition,
        a_hat,
        b_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_cover_and_are_disjoint() {
        let g = Graph::empty(300);
        for seed in 0..5 {
            let pre = preprocess(&g, &RecoveryConfig::empirical(seed)).unwrap();
            let p = &pre.partition;
            let cells = [&p.y1, &p.y2, &p.z, &p.w];
            for (i, a) in cells.iter().enumerate() {
                for b in &cells[i + 1..] {
                    assert!(a.is_disjoint(b));
                }
            }
            assert_eq!(cells.iter().map(|c| c.len()).sum::<usize>(), 300);
            assert_eq!(p.u().union(&p.w), VertexSet::full(300));
            assert_eq!(pre.a_hat.rows(), p.z.to_vec().as_slice());
            assert_eq!(pre.b_hat.cols(), p.y2.to_vec().as_slice());
        }
    }

    #[test]
    fn tiny_graphs_are_rejected() {
        assert!(preprocess(&Graph::empty(7), &RecoveryConfig::empirical(0)).is_err());
    }
}
