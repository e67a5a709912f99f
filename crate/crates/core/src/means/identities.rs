use std::f64::consts::PI;

use nalgebra::Cholesky;

use super::geomean;
use crate::error::{Error, Result};
use crate::linalg::{check_same_dim, SymMatrix};

pub const DEFAULT_QUAD_POINTS: usize = 201;

/// Composite Simpson rule on `[a, b]` with `points` nodes.
///
/// An even node count is rounded up to the next odd one; fewer than three
/// nodes are treated as three.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let mut nodes = points.max(3);
    if nodes.is_multiple_of(2) {
        nodes += 1;
    }
    let intervals = nodes - 1;
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralIdentity {
    /// `det A1`.
    pub lhs: f64,
    /// `det A0 · exp(∫₀¹ tr(A(λ)⁻¹ (A1 − A0)) dλ)`.
    pub rhs: f64,
    pub integral: f64,
    /// Estimated error of the doubled-node Simpson sum.
    pub error_estimate: f64,
}

impl IntegralIdentity {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs()
    }
}

/// `∫₀¹ tr(A(λ)⁻¹ (A1 − A0)) dλ` along the segment `A(λ) = (1−λ)A0 + λA1`.
///
/// Simpson sums on `points` nodes and on the doubled grid are combined by
/// one Richardson step; their difference gives the error estimate.
fn log_det_integral(a0: &SymMatrix, a1: &SymMatrix, points: usize) -> Result<(f64, f64)> {
    check_same_dim(a0, a1)?;
    a0.eig_pd()?;
    a1.eig_pd()?;
    let diff = a1 - a0;
    let integrand = |lambda: f64| -> f64 {
        let m = &((1.0 - lambda) * a0) + &(lambda * a1);
        match Cholesky::new(m.into_matrix()) {
            Some(ch) => ch.solve(diff.as_matrix()).trace(),
            None => f64::NAN,
        }
    };
    let coarse = simpson(integrand, 0.0, 1.0, points);
    let fine = simpson(integrand, 0.0, 1.0, 2 * points.max(3) - 1);
    if !coarse.is_finite() || !fine.is_finite() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: f64::NAN,
        });
    }
    Ok((fine + (fine - coarse) / 15.0, (fine - coarse).abs() / 15.0))
}

pub fn det_integral_identity(
    a0: &SymMatrix,
    a1: &SymMatrix,
    quad_points: usize,
) -> Result<IntegralIdentity> {
    let (integral, error_estimate) = log_det_integral(a0, a1, quad_points)?;
    Ok(IntegralIdentity {
        lhs: a1.det(),
        rhs: a0.det() * integral.exp(),
        integral,
        error_estimate,
    })
}

/// Differential entropy of a centred Gaussian with covariance `sigma`.
pub fn gaussian_entropy(sigma: &SymMatrix) -> Result<f64> {
    let n = sigma.n() as f64;
    Ok(0.5 * sigma.log_det()? + 0.5 * n * (1.0 + (2.0 * PI).ln()))
}

/// Both entropy identities for a pair of Gaussian covariances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyIdentities {
    pub h0: f64,
    pub h1: f64,
    /// `H(Σ1) − H(Σ0)`.
    pub entropy_gap: f64,
    /// `½ ∫₀¹ tr(Σ(λ)⁻¹ (Σ1 − Σ0)) dλ`.
    pub half_integral: f64,
    /// `H(Σ0 #ₜ Σ1)`.
    pub mean_entropy: f64,
    /// `(1 − t) H(Σ0) + t H(Σ1)`.
    pub interpolated_entropy: f64,
}

impl EntropyIdentities {
    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / x.abs().max(y.abs()).max(1.0)
    }

    pub fn integral_gap(&self) -> f64 {
        Self::rel(self.entropy_gap, self.half_integral)
    }

    pub fn mean_gap(&self) -> f64 {
        Self::rel(self.mean_entropy, self.interpolated_entropy)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.integral_gap() <= tol && self.mean_gap() <= tol
    }
}

pub fn entropy_identities(
    sigma0: &SymMatrix,
    sigma1: &SymMatrix,
    t: f64,
    quad_points: usize,
) -> Result<EntropyIdentities> {
    let h0 = gaussian_entropy(sigma0)?;
    let h1 = gaussian_entropy(sigma1)?;
    let (integral, _) = log_det_integral(sigma0, sigma1, quad_points)?;
    let mean_entropy = gaussian_entropy(&geomean(sigma0, sigma1, t)?)?;
    Ok(EntropyIdentities {
        h0,
        h1,
        entropy_gap: h1 - h0,
        half_integral: 0.5 * integral,
        mean_entropy,
        interpolated_entropy: (1.0 - t) * h0 + t * h1,
    })
}
