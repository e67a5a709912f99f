use super::geomean;
use crate::error::{Error, Result};
use crate::linalg::{check_same_dim, riemannian_dist, SymMatrix};

/// Positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(WeightVector(weights))
    }

    /// Rescales positive weights to sum to one.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        if let Some(w) = raw.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let sum: f64 = raw.iter().sum();
        Self::new(raw.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(m: usize) -> Result<Self> {
        Self::new(vec![1.0 / m as f64; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarcherOptions {
    /// Period displacement threshold for the inductive means.
    pub tol: f64,
    /// Cap on inductive steps; `None` means `50 · n · m`.
    pub max_steps: Option<usize>,
    /// Gradient norm at which the mean is accepted.
    pub gradient_tol: f64,
    /// Cap on fixed-point refinement steps after the inductive phase.
    pub max_refine: usize,
}

impl Default for KarcherOptions {
    fn default() -> Self {
        KarcherOptions {
            tol: 1e-9,
            max_steps: None,
            gradient_tol: 1e-10,
            max_refine: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KarcherReport {
    pub mean: SymMatrix,
    /// Inductive-mean steps taken.
    pub steps: usize,
    pub refine_steps: usize,
    /// `‖Σ wᵢ log(X^{-1/2} Aᵢ X^{-1/2})‖_F` at the returned mean.
    pub gradient_norm: f64,
    pub converged: bool,
}

impl KarcherReport {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::MaxStepsExceeded {
                steps: self.steps + self.refine_steps,
                gradient_norm: self.gradient_norm,
            })
        }
    }
}

/// Riemannian gradient direction `Σ wᵢ log(X^{-1/2} Aᵢ X^{-1/2})` at `x`.
fn gradient(
    weights: &WeightVector,
    mats: &[SymMatrix],
    x_ihalf: &SymMatrix,
) -> Result<SymMatrix> {
    let mut g = SymMatrix::zeros(x_ihalf.n());
    for (w, a) in weights.as_slice().iter().zip(mats) {
        g = &g + &(*w * &a.congruence(x_ihalf.as_matrix())?.log()?);
    }
    Ok(g)
}

/// Frobenius norm of the Karcher gradient at `x`.
pub fn karcher_gradient(weights: &WeightVector, mats: &[SymMatrix], x: &SymMatrix) -> Result<f64> {
    Ok(gradient(weights, mats, &x.inv_sqrt()?)?.fro_norm())
}

fn cost(weights: &WeightVector, mats: &[SymMatrix], x: &SymMatrix) -> Result<f64> {
    let mut c = 0.0;
    for (w, a) in weights.as_slice().iter().zip(mats) {
        c += w * riemannian_dist(x, a)?.powi(2);
    }
    Ok(c)
}

/// Weighted Karcher mean.
///
/// Weighted inductive means seed the estimate, stopping once a full period
/// moves less than `tol`; a damped fixed-point iteration
/// `X ← X^{1/2} exp(τ G) X^{1/2}` then drives the gradient below
/// `gradient_tol`.
pub fn karcher_mean(
    weights: &WeightVector,
    mats: &[SymMatrix],
    opts: &KarcherOptions,
) -> Result<KarcherReport> {
    let m = mats.len();
    if m == 0 {
        return Err(Error::EmptySampleSet);
    }
    if weights.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: weights.len(),
        });
    }
    for a in mats {
        check_same_dim(&mats[0], a)?;
        a.eig_pd()?;
    }
    let n = mats[0].n();
    let w = weights.as_slice();
    let max_steps = opts.max_steps.unwrap_or(50 * n * m);

    let mut history: Vec<SymMatrix> = vec![mats[0].clone()];
    let mut cumulative = w[0];
    let mut steps = 1;
    while steps < max_steps {
        let k = steps % m;
        let next_cumulative = cumulative + w[k];
        let s = geomean(&mats[k], history.last().expect("non-empty"), cumulative / next_cumulative)?;
        cumulative = next_cumulative;
        steps += 1;
        history.push(s);
        if history.len() > m {
            let moved = riemannian_dist(&history[history.len() - 1], &history[history.len() - 1 - m])?;
            history.remove(0);
            if moved <= opts.tol {
                break;
            }
        }
    }
    let mut x = history.pop().expect("non-empty");

    let mut x_ihalf = x.inv_sqrt()?;
    let mut g = gradient(weights, mats, &x_ihalf)?;
    let mut gnorm = g.fro_norm();
    let mut current = cost(weights, mats, &x)?;
    let mut refine_steps = 0;
    while gnorm > opts.gradient_tol && refine_steps < opts.max_refine {
        let x_half = x.sqrt()?;
        let mut tau = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = (tau * &g).exp()?.congruence(x_half.as_matrix())?;
            let c = cost(weights, mats, &cand)?;
            if c <= current {
                accepted = Some((cand, c));
                break;
            }
            tau *= 0.5;
        }
        let Some((cand, c)) = accepted else { break };
        x = cand;
        current = c;
        x_ihalf = x.inv_sqrt()?;
        g = gradient(weights, mats, &x_ihalf)?;
        gnorm = g.fro_norm();
        refine_steps += 1;
    }
    let converged = gnorm <= opts.gradient_tol.max(1e-6);
    if !converged {
        log::warn!("Karcher mean stopped with gradient norm {gnorm:e}");
    }
    Ok(KarcherReport {
        mean: x,
        steps,
        refine_steps,
        gradient_norm: gnorm,
        converged,
    })
}
