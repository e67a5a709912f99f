use crate::error::Result;
use crate::linalg::{check_same_dim, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmOptions {
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for AgmOptions {
    fn default() -> Self {
        AgmOptions {
            tol: 1e-12,
            max_steps: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgmReport {
    /// Midpoint of the final harmonic/arithmetic pair.
    pub mean: SymMatrix,
    pub steps: usize,
    pub converged: bool,
    /// `(A_n, B_n)` for `n = 0..=steps`.
    pub iterates: Vec<(SymMatrix, SymMatrix)>,
}

/// Harmonic–arithmetic iteration converging to `A # B`.
///
/// `A_{n+1}` is the harmonic mean and `B_{n+1}` the arithmetic mean of the
/// previous pair; stops when `‖A_n − B_n‖_F ≤ tol ‖B_n‖_F`.
pub fn agm_iteration(a: &SymMatrix, b: &SymMatrix, opts: &AgmOptions) -> Result<AgmReport> {
    check_same_dim(a, b)?;
    a.eig_pd()?;
    b.eig_pd()?;
    let mut lo = a.clone();
    let mut hi = b.clone();
    let mut iterates = vec![(lo.clone(), hi.clone())];
    let mut steps = 0;
    let mut converged = (&lo - &hi).fro_norm() <= opts.tol * hi.fro_norm();
    while !converged && steps < opts.max_steps {
        let harmonic = (0.5 * &(&lo.inverse()? + &hi.inverse()?)).inverse()?;
        let arithmetic = 0.5 * &(&lo + &hi);
        lo = harmonic;
        hi = arithmetic;
        steps += 1;
        iterates.push((lo.clone(), hi.clone()));
        converged = (&lo - &hi).fro_norm() <= opts.tol * hi.fro_norm();
    }
    if !converged {
        log::warn!("harmonic-arithmetic iteration stopped after {steps} steps");
    }
    Ok(AgmReport {
        mean: 0.5 * &(&lo + &hi),
        steps,
        converged,
        iterates,
    })
}
