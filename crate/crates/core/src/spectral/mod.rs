//! Bi-adjacency matrices and truncated left singular subspaces.
//!
//! The top-`k'` subspace is computed by randomized subspace iteration with a
//! Rayleigh–Ritz step (a Gaussian start block of `k' + oversampling` columns,
//! re-orthonormalised after every multiplication). The iteration runs on the
//! Gram matrix of the smaller side, so each step is a single dense product; a
//! last Rayleigh–Ritz pass maps the block back to the left space. Only the subspace is used
//! downstream, so convergence is measured on the subspace itself: the Frobenius
//! norm of the component of the new Ritz basis outside the previous one.

mod expectation;
pub mod reference;

pub use expectation::singular_values_of_expectation;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// 0/1 edge-indicator matrix between two disjoint vertex lists.
#[derive(Clone, Debug)]
pub struct BiAdjacency {
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: DMatrix<f64>,
}

impl BiAdjacency {
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Column for the `j`-th column vertex.
    pub fn column(&self, j: usize) -> DVector<f64> {
        self.entries.column(j).into_owned()
    }
}

/// Builds the bi-adjacency matrix with rows and columns in ascending vertex order.
pub fn build_biadjacency(graph: &Graph, rows: &VertexSet, cols: &VertexSet) -> Result<BiAdjacency> {
    for s in [rows, cols] {
        if s.universe() != graph.n() {
            return Err(Error::DimensionMismatch {
                expected: graph.n(),
                got: s.universe(),
            });
        }
    }
    if let Some(v) = rows.intersection(cols).iter().next() {
        return Err(Error::OverlappingSets(v));
    }
    let rows = rows.to_vec();
    let cols = cols.to_vec();
    let entries = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        if graph.has_edge(rows[i], cols[j]) {
            1.0
        } else {
            0.0
        }
    });
    Ok(BiAdjacency { rows, cols, entries })
}

/// Tuning for [`top_left_singular_basis`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceOptions {
    pub tol: f64,
    pub oversampling: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl SubspaceOptions {
    pub fn new(tol: f64, seed: u64) -> Self {
        Self {
            tol,
            oversampling: 8,
            max_iterations: 200,
            seed,
        }
    }
}

/// Orthonormal basis of an approximate top-`k'` left singular subspace.
#[derive(Clone, Debug)]
pub struct ProjectionBasis {
    basis: DMatrix<f64>,
    singular_values: Vec<f64>,
    residual: f64,
    iterations: usize,
}

impl ProjectionBasis {
    pub fn k_prime(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// `dim x k'` matrix with orthonormal columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Ritz estimates of the top `k'` singular values, non-increasing.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Subspace change at the final iteration.
    pub fn residual_estimate(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Coordinates `basis^T x` of the projection. Euclidean distances between
    /// coordinate vectors equal distances between the ambient projections.
    pub fn coordinates(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(x.len())?;
        Ok(self.basis.tr_mul(x))
    }

    /// Coordinates of every column of `m` at once (`k' x ncols`).
    pub fn coordinates_of_columns(&self, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_dim(m.nrows())?;
        Ok(self.basis.tr_mul(m))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        }
    }
}

/// Orthogonal projection `basis (basis^T x)` of `x`, in ambient coordinates.
pub fn project_column(basis: &ProjectionBasis, x: &DVector<f64>) -> Result<DVector<f64>> {
    let c = basis.coordinates(x)?;
    Ok(&basis.basis * c)
}

fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

/// Flips each column so its first coordinate with magnitude above `1e-12` is positive.
fn fix_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        if let Some(&x) = col.iter().find(|x| x.abs() > 1e-12) {
            if x < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Top-`k'` left singular subspace of `matrix`.
pub fn top_left_singular_basis(
    matrix: &BiAdjacency,
    k_prime: usize,
    opts: SubspaceOptions,
) -> Result<ProjectionBasis> {
    top_left_singular_basis_dense(&matrix.entries, k_prime, opts)
}

pub fn top_left_singular_basis_dense(
    a: &DMatrix<f64>,
    k: usize,
    opts: SubspaceOptions,
) -> Result<ProjectionBasis> {
    let (m, c) = a.shape();
    if k == 0 || k > m.min(c) {
        return Err(Error::InvalidConfig(format!(
            "k' = {k} must lie in 1..={} for a {m}x{c} matrix",
            m.min(c)
        )));
    }
    let block = (k + opts.oversampling).min(m.min(c));
    let at = a.transpose();
    // Iterate on the Gram matrix of the smaller side; one product per step.
    let right_side = c <= m;
    let gram = if right_side { &at * a } else { a * &at };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let omega = DMatrix::from_fn(c, block, |_, _| StandardNormal.sample(&mut rng));
    let mut v = if right_side {
        orthonormalize(&at * (a * omega))
    } else {
        orthonormalize(a * omega)
    };
    let mut prev: Option<DMatrix<f64>> = None;
    let mut residual = f64::INFINITY;

    for it in 1..=opts.max_iterations {
        let gv = &gram * &v;
        let (values, vecs) = sorted_eigen(v.transpose() * &gv);
        let ritz = &v * vecs;
        let top = ritz.columns(0, k).into_owned();
        // directions with a zero Ritz value are arbitrary and never settle
        let floor = values[0].abs() * 1e-12;
        let live = values[..k].iter().take_while(|&&x| x > floor).count();
        if let Some(p) = &prev {
            let head = top.columns(0, live);
            let outside = &head - p * (p.transpose() * &head);
            residual = outside.norm();
        }
        if residual < opts.tol {
            return Ok(finish(a, &at, &ritz, right_side, k, residual, it));
        }
        if it == opts.max_iterations {
            return Err(Error::NotConverged {
                iterations: it,
                residual,
            });
        }
        prev = Some(top);
        v = orthonormalize(gv);
    }
    unreachable!("loop returns on its last iteration")
}

/// Eigenpairs of a symmetric matrix, eigenvalues non-increasing.
fn sorted_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let n = eig.eigenvectors.nrows();
    let vecs = DMatrix::from_fn(n, order.len(), |r, j| eig.eigenvectors[(r, order[j])]);
    (order.iter().map(|&i| eig.eigenvalues[i]).collect(), vecs)
}

/// Rayleigh-Ritz in the left space on the converged block.
fn finish(
    a: &DMatrix<f64>,
    at: &DMatrix<f64>,
    ritz: &DMatrix<f64>,
    right_side: bool,
    k: usize,
    residual: f64,
    iterations: usize,
) -> ProjectionBasis {
    let q = if right_side {
        orthonormalize(a * ritz)
    } else {
        ritz.clone()
    };
    let b = (at * &q).transpose();
    let (values, vecs) = sorted_eigen(&b * b.transpose());
    let mut basis = q * vecs.columns(0, k);
    fix_signs(&mut basis);
    ProjectionBasis {
        basis,
        singular_values: values[..k].iter().map(|x| x.max(0.0).sqrt()).collect(),
        residual,
        iterations,
    }
}
