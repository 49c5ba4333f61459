use crate::graph::VertexSet;
use crate::sbm::GroundTruth;

/// Cluster `i` with the most members in `s`, if every other cluster contributes at
/// most a tenth of that count.
pub fn dominant_cluster(s: &VertexSet, truth: &GroundTruth) -> Option<usize> {
    let mut counts = vec![0usize; truth.k()];
    for v in s.iter() {
        counts[truth.label(v)] += 1;
    }
    let (best, &top) = counts.iter().enumerate().max_by_key(|(_, &c)| c)?;
    if top == 0 {
        return None;
    }
    let ratio_ok = counts
        .iter()
        .enumerate()
        .all(|(j, &c)| j == best || c as f64 <= 0.1 * top as f64);
    ratio_ok.then_some(best)
}

/// Both plural-set clauses: the ratio clause of [`dominant_cluster`] and
/// `|S ∩ V_i| >= c_abs sqrt(n) ln n` (with `c_abs = 8192` in the theory setting).
pub fn is_plural_set(s: &VertexSet, truth: &GroundTruth, i: usize, c_abs: f64) -> bool {
    let n = truth.n() as f64;
    let inside = s.intersection_len(&truth.cluster(i));
    dominant_cluster(s, truth) == Some(i) && inside as f64 >= c_abs * n.sqrt() * n.ln()
}
