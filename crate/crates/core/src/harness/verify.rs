use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::VertexSet;
use crate::rng::stream_rng;
use crate::sbm::{sample_sbm, SbmSpec};
use crate::spectral::reference::{jacobi_svd, max_principal_angle_sin};
use crate::spectral::{
    build_biadjacency, singular_values_of_expectation, top_left_singular_basis_dense, SubspaceOptions,
};

use super::bruteforce::{ml_bruteforce_partition, BRUTEFORCE_MAX_K, BRUTEFORCE_MAX_N};
use super::evaluate::same_partition;

/// How many random instances each cross-check draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub scan_graphs: usize,
    pub svd_matrices: usize,
    pub expectation_matrices: usize,
    pub bound_matrices: usize,
    pub ml_instances: usize,
}

impl VerifyOptions {
    pub fn full(seed: u64) -> Self {
        Self {
            seed,
            scan_graphs: 20,
            svd_matrices: 200,
            expectation_matrices: 100,
            bound_matrices: 1000,
            ml_instances: 20,
        }
    }

    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            scan_graphs: 4,
            svd_matrices: 20,
            expectation_matrices: 20,
            bound_matrices: 100,
            ml_instances: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_verification(opts: VerifyOptions) -> Result<VerifyReport> {
    Ok(VerifyReport {
        options: opts,
        checks: vec![
            check_biadjacency_scan(opts.seed, opts.scan_graphs)?,
            check_subspace_vs_dense(opts.seed, opts.svd_matrices)?,
            check_expectation_spectrum(opts.seed, opts.expectation_matrices),
            check_singular_value_bound(opts.seed, opts.bound_matrices),
            check_ml_agreement(opts.seed, opts.ml_instances)?,
        ],
    })
}

fn random_split(rng: &mut ChaCha8Rng, n: usize) -> (VertexSet, VertexSet) {
    let (mut a, mut b) = (VertexSet::empty(n), VertexSet::empty(n));
    for v in 0..n {
        match rng.random_range(0..3) {
            0 => a.insert(v),
            1 => b.insert(v),
            _ => {}
        }
    }
    (a, b)
}

/// Bi-adjacency entries against direct edge lookups.
pub fn check_biadjacency_scan(seed: u64, graphs: usize) -> Result<CheckResult> {
    let mut rng = stream_rng(seed, 21);
    let mut mismatches = 0;
    for g in 0..graphs {
        let n = rng.random_range(2..80);
        let spec = SbmSpec::new(vec![n / 2, n - n / 2], 0.6, 0.2, seed.wrapping_add(g as u64))?;
        let (graph, _) = sample_sbm(&spec)?;
        let (rows, cols) = random_split(&mut rng, n);
        let m = build_biadjacency(&graph, &rows, &cols)?;
        for (i, &u) in m.rows().iter().enumerate() {
            for (j, &v) in m.cols().iter().enumerate() {
                if (m.entries()[(i, j)] == 1.0) != graph.has_edge(u, v) {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(CheckResult {
        name: "bi-adjacency matches edge lookups",
        passed: mismatches == 0,
        detail: format!("{graphs} graphs, {mismatches} mismatched entries"),
    })
}

/// Randomized top-k subspace against a dense Jacobi SVD on random 0/1 matrices
/// up to 80x60. Matrices whose gap at k is at most 1e-3 are not compared.
pub fn check_subspace_vs_dense(seed: u64, matrices: usize) -> Result<CheckResult> {
    let mut rng = stream_rng(seed, 22);
    let (mut compared, mut failed, mut worst) = (0, 0, 0.0f64);
    for t in 0..matrices {
        let (m, c) = (rng.random_range(2..=80), rng.random_range(2..=60));
        let density = rng.random_range(0.1..0.9);
        let a = DMatrix::from_fn(m, c, |_, _| f64::from(u8::from(rng.random_bool(density))));
        let k = rng.random_range(1..=m.min(c).min(10));
        let dense = jacobi_svd(&a);
        let sv = &dense.singular_values;
        let next = sv.get(k).copied().unwrap_or(0.0);
        if sv[k - 1] - next <= 1e-3 {
            continue;
        }
        compared += 1;
        let opts = SubspaceOptions {
            max_iterations: 5000,
            ..SubspaceOptions::new(1e-12, seed.wrapping_add(t as u64))
        };
        let angle = match top_left_singular_basis_dense(&a, k, opts) {
            Ok(basis) => max_principal_angle_sin(basis.basis(), &dense.u.columns(0, k).into_owned()),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(angle);
        if !(angle < 1e-6) {
            failed += 1;
        }
    }
    Ok(CheckResult {
        name: "randomized subspace matches dense SVD",
        passed: failed == 0,
        detail: format!("{compared} of {matrices} matrices had a gap above 1e-3; {failed} failed; worst sin angle {worst:.2e}"),
    })
}

fn random_blocks(rng: &mut ChaCha8Rng, max_total: usize) -> (Vec<usize>, Vec<usize>, f64, f64) {
    let k = rng.random_range(1..=6);
    let mut a = vec![0; k];
    let mut b = vec![0; k];
    let total = rng.random_range(2..=max_total);
    for _ in 0..total {
        let i = rng.random_range(0..k);
        if rng.random_bool(0.5) {
            a[i] += 1;
        } else {
            b[i] += 1;
        }
    }
    let p: f64 = rng.random_range(0.01..=1.0);
    let q = rng.random_range(0.0..p);
    (a, b, p, q)
}

fn expectation_matrix(a: &[usize], b: &[usize], p: f64, q: f64) -> DMatrix<f64> {
    let row_label: Vec<usize> = a.iter().enumerate().flat_map(|(i, &x)| std::iter::repeat_n(i, x)).collect();
    let col_label: Vec<usize> = b.iter().enumerate().flat_map(|(i, &x)| std::iter::repeat_n(i, x)).collect();
    DMatrix::from_fn(row_label.len(), col_label.len(), |i, j| {
        if row_label[i] == col_label[j] {
            p
        } else {
            q
        }
    })
}

/// Closed-form spectrum of an expectation matrix against a dense SVD of it.
pub fn check_expectation_spectrum(seed: u64, matrices: usize) -> CheckResult {
    let mut rng = stream_rng(seed, 23);
    let mut worst = 0.0f64;
    for _ in 0..matrices {
        let (a, b, p, q) = random_blocks(&mut rng, 60);
        let m = expectation_matrix(&a, &b, p, q);
        let dense = if m.is_empty() { Vec::new() } else { jacobi_svd(&m).singular_values };
        let closed = singular_values_of_expectation(p, q, &a, &b);
        let scale = dense.first().copied().unwrap_or(0.0).max(1.0);
        for i in 0..dense.len().max(closed.len()) {
            let x = dense.get(i).copied().unwrap_or(0.0);
            let y = closed.get(i).copied().unwrap_or(0.0);
            worst = worst.max((x - y).abs() / scale);
        }
    }
    CheckResult {
        name: "expectation spectrum matches dense SVD",
        passed: worst < 1e-9,
        detail: format!("{matrices} matrices, worst relative error {worst:.2e}"),
    }
}

/// `sigma_t <= (p - q) n / t` for every `t >= 2`, with `n` the number of rows
/// plus columns.
pub fn check_singular_value_bound(seed: u64, matrices: usize) -> CheckResult {
    let mut rng = stream_rng(seed, 24);
    let (mut violations, mut tightest) = (0, 0.0f64);
    for _ in 0..matrices {
        let (a, b, p, q) = random_blocks(&mut rng, 500);
        let n = (a.iter().sum::<usize>() + b.iter().sum::<usize>()) as f64;
        let sv = singular_values_of_expectation(p, q, &a, &b);
        for (i, &s) in sv.iter().enumerate().skip(1) {
            let bound = (p - q) * n / (i + 1) as f64;
            if bound > 0.0 {
                tightest = tightest.max(s / bound);
            }
            if s > bound * (1.0 + 1e-9) + 1e-12 {
                violations += 1;
            }
        }
    }
    CheckResult {
        name: "singular values obey (p - q) n / t",
        passed: violations == 0,
        detail: format!("{matrices} matrices, {violations} violations, largest ratio to bound {tightest:.3}"),
    }
}

/// Exhaustive ML partitions of two-cluster graphs with n = 10, p = 0.95,
/// q = 0.05 against the planted truth. At least 90% must agree.
pub fn check_ml_agreement(seed: u64, instances: usize) -> Result<CheckResult> {
    let mut agree = 0;
    for i in 0..instances {
        let spec = SbmSpec::new(vec![5, 5], 0.95, 0.05, seed.wrapping_add(i as u64))?;
        let (g, truth) = sample_sbm(&spec)?;
        let ml = ml_bruteforce_partition(&g, 0.95, 0.05, BRUTEFORCE_MAX_N, BRUTEFORCE_MAX_K)?;
        agree += usize::from(same_partition(ml.labels(), truth.labels()));
    }
    Ok(CheckResult {
        name: "maximum-likelihood partition equals planted truth",
        passed: 10 * agree >= 9 * instances,
        detail: format!("{agree}/{instances} instances"),
    })
}
