//! Dense one-sided Jacobi SVD, kept deliberately separate from the iterative
//! solver so it can serve as a cross-check on small matrices.

use nalgebra::DMatrix;

/// Full thin SVD `a = u diag(s) v^T` with singular values in non-increasing order.
#[derive(Clone, Debug)]
pub struct DenseSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// One-sided (Hestenes) Jacobi SVD. Intended for matrices of a few hundred rows at most.
pub fn jacobi_svd(a: &DMatrix<f64>) -> DenseSvd {
    let (m, n) = a.shape();
    if m < n {
        let t = jacobi_svd(&a.transpose());
        return DenseSvd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let (x, y) = (w[(r, i)], w[(r, j)]);
                    w[(r, i)] = c * x - s * y;
                    w[(r, j)] = s * x + c * y;
                }
                for r in 0..n {
                    let (x, y) = (v[(r, i)], v[(r, j)]);
                    v[(r, i)] = c * x - s * y;
                    v[(r, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u = DMatrix::zeros(m, n);
    let mut vs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        if norms[src] > 0.0 {
            u.set_column(dst, &(w.column(src) / norms[src]));
        }
        vs.set_column(dst, &v.column(src));
    }
    DenseSvd {
        u,
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        v: vs,
    }
}

/// Sine of the largest principal angle between the column spans of two matrices
/// with orthonormal columns: `|| x - y (y^T x) ||_2`.
pub fn max_principal_angle_sin(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let outside = x - y * y.tr_mul(x);
    jacobi_svd(&outside)
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0)
}
