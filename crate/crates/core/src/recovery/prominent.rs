/// Number of leading clusters that iterated peeling is expected to recover.
///
/// Smallest `k'` such that, for the residual sizes `s_{k'+1}, …, s_k` with total `r`,
/// either `s_{k'+1} < c_size sqrt(p(1-q)) sqrt(r) / (p - q)` or `sigma^2 < ln(r) / r`.
/// Returns `k` when no residual remains. `sizes` must be sorted non-increasing.
pub fn prominent_cluster_count(sizes: &[usize], p: f64, q: f64, c_size: f64) -> usize {
    debug_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    let sigma2 = (p * (1.0 - p)).max(q * (1.0 - q));
    let scale = c_size * (p * (1.0 - q)).sqrt() / (p - q);
    for k in 0..sizes.len() {
        let rest = sizes[k..].iter().sum::<usize>() as f64;
        let too_small = (sizes[k] as f64) < scale * rest.sqrt();
        let too_sparse = sigma2 < rest.ln() / rest;
        if too_small || too_sparse {
            return k;
        }
    }
    sizes.len()
}
