//! Exhaustive maximum-likelihood partition for tiny graphs, used as an
//! independent reference when cross-checking the recovery pipeline.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::GroundTruth;

/// Largest graph the exhaustive search accepts.
pub const BRUTEFORCE_MAX_N: usize = 12;
/// Largest number of blocks the exhaustive search accepts.
pub const BRUTEFORCE_MAX_K: usize = 3;

fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// SBM log-likelihood of `labels` for `graph`.
pub fn log_likelihood(graph: &Graph, labels: &[usize], p: f64, q: f64) -> f64 {
    let (lp, lnp, lq, lnq) = (ln_or_neg_inf(p), ln_or_neg_inf(1.0 - p), ln_or_neg_inf(q), ln_or_neg_inf(1.0 - q));
    let mut total = 0.0;
    for u in 0..graph.n() {
        for v in u + 1..graph.n() {
            let e = graph.has_edge(u, v);
            total += match (labels[u] == labels[v], e) {
                (true, true) => lp,
                (true, false) => lnp,
                (false, true) => lq,
                (false, false) => lnq,
            };
        }
    }
    total
}

/// Partition into at most `max_k` blocks maximising the SBM likelihood, found by
/// enumerating restricted-growth strings. Ties keep the first partition in
/// enumeration order; labels are numbered by first appearance.
pub fn ml_bruteforce_partition(
    graph: &Graph,
    p: f64,
    q: f64,
    max_n: usize,
    max_k: usize,
) -> Result<GroundTruth> {
    let n = graph.n();
    let max_n = max_n.min(BRUTEFORCE_MAX_N);
    if n > max_n {
        return Err(Error::TooLarge { n, max: max_n });
    }
    if max_k == 0 || max_k > BRUTEFORCE_MAX_K {
        return Err(Error::InvalidConfig(format!(
            "max_k = {max_k} must lie in 1..={BRUTEFORCE_MAX_K}"
        )));
    }
    if n == 0 {
        return GroundTruth::from_labels(Vec::new());
    }
    let mut labels = vec![0usize; n];
    let mut best = labels.clone();
    let mut best_ll = log_likelihood(graph, &labels, p, q);
    while next_rgs(&mut labels, max_k) {
        let ll = log_likelihood(graph, &labels, p, q);
        if ll > best_ll {
            best_ll = ll;
            best.clone_from(&labels);
        }
    }
    GroundTruth::from_labels(best)
}

/// Advances `labels` to the next restricted-growth string with entries below
/// `max_k`: `labels[0] = 0` and `labels[i] <= 1 + max(labels[..i])`. Returns
/// false once the last one has been passed.
fn next_rgs(labels: &mut [usize], max_k: usize) -> bool {
    for i in (1..labels.len()).rev() {
        let cap = labels[..i].iter().max().map_or(0, |m| m + 1).min(max_k - 1);
        if labels[i] < cap {
            labels[i] += 1;
            labels[i + 1..].iter_mut().for_each(|l| *l = 0);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_partial(n: usize, k: usize) -> usize {
        // number of partitions of n into at most k blocks, via Stirling numbers
        let mut s = vec![vec![0usize; k + 1]; n + 1];
        s[0][0] = 1;
        for i in 1..=n {
            for j in 1..=k {
                s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
            }
        }
        s[n].iter().sum()
    }

    #[test]
    fn two_triangles() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let t = ml_bruteforce_partition(&g, 1.0, 0.0, 12, 3).unwrap();
        assert_eq!(t.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn single_clique() {
        let g = Graph::from_edges(6, (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v)))).unwrap();
        let t = ml_bruteforce_partition(&g, 1.0, 0.0, 12, 3).unwrap();
        assert_eq!(t.k(), 1);
    }

    #[test]
    fn enumeration_visits_every_partition() {
        for n in 1..=7 {
            for k in 1..=3 {
                let mut labels = vec![0; n];
                let mut seen = std::collections::HashSet::new();
                seen.insert(labels.clone());
                while next_rgs(&mut labels, k) {
                    assert!(labels.iter().all(|&l| l < k));
                    assert!(seen.insert(labels.clone()));
                }
                assert_eq!(seen.len(), bell_partial(n, k), "n={n} k={k}");
            }
        }
        // with p = q every partition ties, so the first one is kept
        let t = ml_bruteforce_partition(&Graph::empty(5), 0.5, 0.5, 12, 3).unwrap();
        assert_eq!(t.k(), 1);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            ml_bruteforce_partition(&Graph::empty(13), 0.9, 0.1, 20, 3),
            Err(Error::TooLarge { n: 13, max: 12 })
        ));
        assert!(ml_bruteforce_partition(&Graph::empty(4), 0.9, 0.1, 12, 4).is_err());
        assert!(ml_bruteforce_partition(&Graph::empty(4), 0.9, 0.1, 3, 2).is_err());
    }
}
