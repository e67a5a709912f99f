//! Weighted geometric means of positive definite matrices, of finite sets of
//! them, and of partial matrices through their maximum-determinant
//! completions; Karcher means, the harmonic–arithmetic iteration and the
//! determinant/entropy identities.

mod agm;
mod identities;
mod karcher;
mod properties;
mod sets;

use nalgebra::DMatrix;

use crate::completion::{max_det_completion, CompletionOptions, CompletionReport};
use crate::error::{Error, Result};
use crate::linalg::{check_same_dim, SymMatrix, DEFAULT_PD_TOL};
use crate::partial::PartialMatrix;

pub use agm::{agm_iteration, AgmOptions, AgmReport};
pub use identities::{
    det_integral_identity, entropy_identities, gaussian_entropy, simpson, EntropyIdentities,
    IntegralIdentity, DEFAULT_QUAD_POINTS,
};
pub use karcher::{karcher_gradient, karcher_mean, KarcherOptions, KarcherReport, WeightVector};
pub use properties::{geomean_properties_check, GeomeanProperties, PropertyInputs};
pub use sets::{set_geomean, SampleSet};

/// `A #ₜ B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`, the point at parameter
/// `t` on the geodesic from `A` to `B`.
///
/// Values of `t` outside `[0, 1]` extrapolate along the geodesic and are
/// logged as a warning.
pub fn geomean(a: &SymMatrix, b: &SymMatrix, t: f64) -> Result<SymMatrix> {
    check_same_dim(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        log::warn!("geometric mean weight t = {t} lies outside [0, 1]");
    }
    let ea = a.eig_pd()?;
    b.eig_pd()?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let a_half = SymMatrix::from_decomp(&ea, f64::sqrt);
    let a_ihalf = SymMatrix::from_decomp(&ea, |x| 1.0 / x.sqrt());
    let inner = b.congruence(a_ihalf.as_matrix())?;
    // Congruent to B, hence positive definite; only rounding can push its
    // smallest eigenvalue to zero when A is ill-conditioned.
    let inner_t = inner.map_spectrum(|x| x.max(f64::MIN_POSITIVE).powf(t))?;
    inner_t.congruence(a_half.as_matrix())
}

/// Checks that `[[A, X], [X, B]]` is positive semidefinite within `tol`.
pub fn block_is_psd(a: &SymMatrix, b: &SymMatrix, x: &SymMatrix, tol: f64) -> Result<bool> {
    check_same_dim(a, b)?;
    check_same_dim(a, x)?;
    let n = a.n();
    let block = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a.get(i, j),
        (false, false) => b.get(i - n, j - n),
        (true, false) => x.get(i, j - n),
        (false, true) => x.get(i - n, j),
    });
    Ok(SymMatrix::symmetrize(&block)?.is_psd(tol))
}

/// `A # B` is the largest `X` with `[[A, X], [X, B]] ≥ 0`.
///
/// Returns true when the block is PSD at `X = A # B` and stops being PSD once
/// `X` is pushed up by `ε I` with `ε = 10⁻⁶ ‖X‖`.
pub fn block_max_property(a: &SymMatrix, b: &SymMatrix) -> Result<bool> {
    let x = geomean(a, b, 0.5)?;
    if !block_is_psd(a, b, &x, DEFAULT_PD_TOL)? {
        return Ok(false);
    }
    let eps = 1e-6 * x.op_norm();
    let bumped = &x + &(eps * &SymMatrix::identity(x.n()));
    Ok(!block_is_psd(a, b, &bumped, DEFAULT_PD_TOL)?)
}

/// Maximum-determinant representative of the mean of two partial matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMeanReport {
    pub a_hat: CompletionReport,
    pub b_hat: CompletionReport,
    /// `Â #ₜ B̂`.
    pub mean: SymMatrix,
    pub determinant: f64,
    /// `det(Â)^{1−t} det(B̂)^t`.
    pub predicted_determinant: f64,
}

/// Completes both partial matrices to maximum determinant and averages them.
/// Among all means of completions, `Â #ₜ B̂` has the largest determinant.
pub fn partial_geomean_maxdet(
    a: &PartialMatrix,
    b: &PartialMatrix,
    t: f64,
    opts: &CompletionOptions,
) -> Result<PartialMeanReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let a_hat = max_det_completion(a, opts)?.require_converged()?;
    let b_hat = max_det_completion(b, opts)?.require_converged()?;
    let mean = geomean(&a_hat.matrix, &b_hat.matrix, t)?;
    let predicted_determinant = a_hat.determinant.powf(1.0 - t) * b_hat.determinant.powf(t);
    Ok(PartialMeanReport {
        determinant: mean.det(),
        mean,
        predicted_determinant,
        a_hat,
        b_hat,
    })
}
