//! Dense real symmetric matrices and the spectral machinery built on them.
//!
//! Every matrix function goes through [`SymMatrix::eig`] and is re-symmetrized
//! before it is returned, so symmetry holds bit-for-bit on every value of this
//! type.

mod eigen;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use eigen::{jacobi_eigen, EigenDecomp};

/// Default relative tolerance for positive (semi)definiteness decisions.
pub const DEFAULT_PD_TOL: f64 = 1e-10;

/// How to treat an input that is not exactly symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Reject,
    Symmetrize,
}

/// A dense real symmetric `n × n` matrix.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    data: DMatrix<f64>,
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix{}", self.data)
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.data, f)
    }
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

impl SymMatrix {
    pub fn new(m: DMatrix<f64>, symmetry: Symmetry) -> Result<Self> {
        let n = m.nrows();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        match symmetry {
            Symmetry::Reject => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        if m[(i, j)] != m[(j, i)] {
                            return Err(Error::Asymmetric { row: i, col: j });
                        }
                    }
                }
                Ok(Self { data: m })
            }
            Symmetry::Symmetrize => Ok(Self {
                data: symmetrized(&m),
            }),
        }
    }

    /// Builds from a square array of rows, rejecting asymmetric input.
    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        let data = DMatrix::from_fn(N, N, |i, j| rows[i][j]);
        Self::new(data, Symmetry::Reject)
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries), Symmetry::Reject)
    }

    /// `(M + Mᵀ) / 2` of an arbitrary square matrix.
    pub fn symmetrize(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.clone(), Symmetry::Symmetrize)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: DMatrix::zeros(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            data: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    /// Entry `(i, j)` of the result is `f(i, j)` for `i <= j`, mirrored below.
    pub fn from_upper_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Self { data }
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[(i, j)] = value;
        self.data[(j, i)] = value;
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.data[(i, i)]).collect()
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        let k = idx.len();
        Self {
            data: DMatrix::from_fn(k, k, |a, b| self.data[(idx[a], idx[b])]),
        }
    }

    /// Matrix product with an arbitrary right factor.
    pub fn mul_matrix(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        &self.data * rhs
    }

    /// `Sᵀ A S` for an arbitrary square `S`.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<SymMatrix> {
        if s.nrows() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: s.nrows(),
            });
        }
        let m = s.transpose() * &self.data * s;
        Ok(Self {
            data: symmetrized(&m),
        })
    }

    /// Symmetrized product `(AB + BA) / 2`; equals `AB` when the factors commute.
    pub fn jordan_product(&self, other: &SymMatrix) -> SymMatrix {
        let ab = &self.data * &other.data;
        Self {
            data: symmetrized(&ab),
        }
    }

    pub fn eig(&self) -> Result<EigenDecomp> {
        jacobi_eigen(&self.data)
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig()?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("n >= 1"))
    }

    /// `max(1, ‖A‖)` with the operator norm; the scale used by tolerance checks.
    pub fn tol_scale(&self) -> f64 {
        self.op_norm().max(1.0)
    }

    /// `λ_min(A) > tol · max(1, ‖A‖)`.
    pub fn is_pd(&self, tol: f64) -> bool {
        match self.eigenvalues() {
            Ok(vals) => {
                let scale = vals[0].abs().max(vals[vals.len() - 1].abs()).max(1.0);
                vals[vals.len() - 1] > tol * scale
            }
            Err(_) => false,
        }
    }

    /// `λ_min(A) ≥ −tol · max(1, ‖A‖)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        match self.eigenvalues() {
            Ok(vals) => {
                let scale = vals[0].abs().max(vals[vals.len() - 1].abs()).max(1.0);
                vals[vals.len() - 1] >= -tol * scale
            }
            Err(_) => false,
        }
    }

    /// Eigendecomposition after confirming positive definiteness at the default tolerance.
    pub fn eig_pd(&self) -> Result<EigenDecomp> {
        let e = self.eig()?;
        let lo = e.values[e.dim() - 1];
        let scale = e.values[0].abs().max(lo.abs()).max(1.0);
        if lo <= DEFAULT_PD_TOL * scale {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
        }
        Ok(e)
    }

    /// `Q f(Λ) Qᵀ` for a function that is defined on the whole real line.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        let e = self.eig()?;
        Ok(Self::from_decomp(&e, f))
    }

    /// `Q f(Λ) Qᵀ` for a function that needs strictly positive arguments.
    pub fn map_spectrum_pd(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        let e = self.eig_pd()?;
        Ok(Self::from_decomp(&e, f))
    }

    pub fn from_decomp(e: &EigenDecomp, f: impl Fn(f64) -> f64) -> SymMatrix {
        Self {
            data: symmetrized(&e.recompose_with(f)),
        }
    }

    /// Principal square root. Tiny negative eigenvalues within tolerance are clamped to zero.
    pub fn sqrt(&self) -> Result<SymMatrix> {
        let e = self.eig()?;
        let lo = e.values[e.dim() - 1];
        if lo < -DEFAULT_PD_TOL * self.tol_scale() {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
        }
        Ok(Self::from_decomp(&e, |x| x.max(0.0).sqrt()))
    }

    pub fn inv_sqrt(&self) -> Result<SymMatrix> {
        self.map_spectrum_pd(|x| 1.0 / x.sqrt())
    }

    /// `A^t` for real `t`; requires positive definiteness.
    pub fn powf(&self, t: f64) -> Result<SymMatrix> {
        self.map_spectrum_pd(|x| x.powf(t))
    }

    pub fn log(&self) -> Result<SymMatrix> {
        self.map_spectrum_pd(f64::ln)
    }

    pub fn exp(&self) -> Result<SymMatrix> {
        self.map_spectrum(f64::exp)
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        self.map_spectrum_pd(|x| 1.0 / x)
    }

    pub fn det(&self) -> f64 {
        self.data.clone().lu().determinant()
    }

    /// `Σ ln λᵢ`; requires positive definiteness.
    pub fn log_det(&self) -> Result<f64> {
        let e = self.eig_pd()?;
        Ok(e.values.iter().map(|x| x.ln()).sum())
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Spectral norm: the largest absolute eigenvalue.
    pub fn op_norm(&self) -> f64 {
        match self.eigenvalues() {
            Ok(v) => v[0].abs().max(v[v.len() - 1].abs()),
            Err(_) => self.data.norm(),
        }
    }

    /// Solves `A x = b` for positive definite `A` through a Cholesky factor.
    pub fn solve_pd(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        let chol = self
            .data
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite {
                min_eigenvalue: self.min_eigenvalue().unwrap_or(f64::NAN),
            })?;
        Ok(chol.solve(b))
    }

    /// `x ↦ xᵀ A⁻¹ y` for positive definite `A`.
    pub fn inverse_form(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        Ok(x.dot(&self.solve_pd(y)?))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        (&self.data - &other.data).amax()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl Mul<&SymMatrix> for f64 {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            data: &rhs.data * self,
        }
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        SymMatrix { data: -&self.data }
    }
}

/// Riemannian trace distance `‖log(A^{-1/2} B A^{-1/2})‖_F`.
pub fn riemannian_dist(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    check_same_dim(a, b)?;
    let a_isqrt = a.inv_sqrt()?;
    let inner = b.congruence(a_isqrt.as_matrix())?;
    let e = inner.eig_pd()?;
    Ok(e.values.iter().map(|x| x.ln().powi(2)).sum::<f64>().sqrt())
}

pub(crate) fn check_same_dim(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}
