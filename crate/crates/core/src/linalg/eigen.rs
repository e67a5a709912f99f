//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative off-diagonal threshold at which a sweep sequence stops.
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues in non-increasing order with the matching orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenDecomp {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Q diag(f(λ)) Qᵀ`, without any symmetrization.
    pub fn recompose_with(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            scaled.column_mut(k).scale_mut(fk);
        }
        let mut out = DMatrix::zeros(n, n);
        out.gemm(1.0, &scaled, &self.vectors.transpose(), 0.0);
        out
    }
}

fn off_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a symmetric matrix with threshold cyclic Jacobi rotations.
///
/// The input must be symmetric; only that assumption is relied on, it is not
/// re-checked here.
pub fn jacobi_eigen(input: &DMatrix<f64>) -> Result<EigenDecomp> {
    let n = input.nrows();
    let mut a = input.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();
    let max_rotations = 100 * n * n;
    let mut rotations = 0usize;

    loop {
        if off_norm(&a) <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Entry is below the resolution of its diagonal neighbours.
                if apq.abs() <= 0.5 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                if rotations >= max_rotations {
                    return Err(Error::InternalNumerics { rotations });
                }
                rotations += 1;
                rotated = true;

                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomp { values, vectors })
}
