use nalgebra::DMatrix;

/// Singular values of the expected bi-adjacency matrix of a planted partition.
///
/// Cluster `i` contributes `rows_per_cluster[i]` rows and `cols_per_cluster[i]`
/// columns. The expectation is `(p - q) * sum_i 1_{a_i} 1_{b_i}^T + q * J`, which
/// factors through the `k x k` core `Da^{1/2} ((p - q) I + q 11^T) Db^{1/2}`; its
/// singular values are returned in non-increasing order. All other singular values
/// of the full matrix are zero.
pub fn singular_values_of_expectation(
    p: f64,
    q: f64,
    rows_per_cluster: &[usize],
    cols_per_cluster: &[usize],
) -> Vec<f64> {
    let k = rows_per_cluster.len().max(cols_per_cluster.len());
    if k == 0 {
        return Vec::new();
    }
    let count = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0) as f64;
    let core = DMatrix::from_fn(k, k, |i, j| {
        let m = if i == j { p } else { q };
        count(rows_per_cluster, i).sqrt() * m * count(cols_per_cluster, j).sqrt()
    });
    let mut sv: Vec<f64> = core.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
