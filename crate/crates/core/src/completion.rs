//! Maximum-determinant positive definite completion.
//!
//! The workhorse is the single-entry problem: with every other entry fixed,
//! the values of one off-diagonal entry that keep the matrix positive
//! definite form an open interval, and the determinant is maximised at its
//! centre. Cycling this update over all missing positions converges to the
//! unique maximum-determinant completion, characterised by an inverse that
//! vanishes on every unspecified position.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{SymMatrix, DEFAULT_PD_TOL};
use crate::partial::PartialMatrix;
use crate::pattern::Chordality;

/// Open interval `(center − half_width, center + half_width)` of values for
/// one entry that keep the surrounding matrix positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityInterval {
    pub position: (usize, usize),
    pub center: f64,
    pub half_width: f64,
}

impl FeasibilityInterval {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() < self.half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletionOptions {
    /// Convergence threshold on `max |(M⁻¹)ᵢⱼ|` over unspecified positions,
    /// relative to `‖M⁻¹‖`.
    pub tol: f64,
    pub max_cycles: usize,
    /// Tolerance for the partial positive definiteness check of the input.
    pub pd_tol: f64,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_cycles: 500,
            pd_tol: DEFAULT_PD_TOL,
        }
    }
}

/// How the iteration was started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialFill {
    /// No missing entries.
    None,
    /// Every missing entry set to zero.
    Zero,
    /// Conditional centres filled vertex by vertex along a perfect elimination ordering.
    EliminationOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionReport {
    pub matrix: SymMatrix,
    pub determinant: f64,
    /// Completed sweeps over the missing positions.
    pub iterations: usize,
    /// `max |(M⁻¹)ᵢⱼ|` over unspecified positions.
    pub residual: f64,
    /// `‖M⁻¹‖` (spectral norm) at the final iterate.
    pub inverse_norm: f64,
    pub converged: bool,
    pub initial_fill: InitialFill,
}

impl CompletionReport {
    /// Turns a non-converged report into [`Error::MaxCyclesExceeded`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::MaxCyclesExceeded {
                cycles: self.iterations,
                residual: self.residual,
            })
        }
    }
}

/// Permutation matrix `P` such that `(Pᵀ M P)` moves row/column `i` to the
/// front and `j` to the back, keeping the others in their original order.
pub fn corner_permutation(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let order = corner_order(n, i, j);
    let mut p = DMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        p[(src, k)] = 1.0;
    }
    p
}

fn corner_order(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(n);
    order.push(i);
    order.extend((0..n).filter(|&k| k != i && k != j));
    order.push(j);
    order
}

fn check_position(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidIndex(format!(
            "({}, {}) is not an off-diagonal position of a {n}×{n} matrix",
            i + 1,
            j + 1
        )));
    }
    Ok(())
}

/// Feasible values for entry `(i, j)` of `m` with all other entries held fixed.
///
/// With `m` permuted to `[[a, vᵀ, x], [v, C, w], [x, wᵀ, b]]`, the matrix is
/// positive definite iff `|x − vᵀC⁻¹w|² < det(A)·det(B)/det(C)²`, where
/// `A` and `B` are the leading and trailing `(n−1)×(n−1)` blocks. The ratio
/// is evaluated as the product of the Schur complements
/// `(a − vᵀC⁻¹v)(b − wᵀC⁻¹w)`.
pub fn single_entry_interval(m: &SymMatrix, i: usize, j: usize) -> Result<FeasibilityInterval> {
    let n = m.n();
    check_position(n, i, j)?;
    let (lo, hi) = (i.min(j), i.max(j));
    let h = m.congruence(&corner_permutation(n, lo, hi))?;
    let order = corner_order(n, lo, hi);
    let a = h.get(0, 0);
    let b = h.get(n - 1, n - 1);

    let leading_clique = || {
        let mut c: Vec<usize> = order[..n - 1].to_vec();
        c.sort_unstable();
        c
    };
    let trailing_clique = || {
        let mut c: Vec<usize> = order[1..].to_vec();
        c.sort_unstable();
        c
    };

    let (center, schur_a, schur_b) = if n == 2 {
        (0.0, a, b)
    } else {
        let inner: Vec<usize> = (1..n - 1).collect();
        let c = h.principal(&inner);
        let v = DVector::from_fn(n - 2, |k, _| h.get(k + 1, 0));
        let w = DVector::from_fn(n - 2, |k, _| h.get(k + 1, n - 1));
        let chol = c
            .as_matrix()
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotPartialPd {
                clique: leading_clique(),
            })?;
        let cinv_v = chol.solve(&v);
        let cinv_w = chol.solve(&w);
        (v.dot(&cinv_w), a - v.dot(&cinv_v), b - w.dot(&cinv_w))
    };
    if schur_a <= DEFAULT_PD_TOL * a.abs().max(1.0) || !schur_a.is_finite() {
        return Err(Error::NotPartialPd {
            clique: leading_clique(),
        });
    }
    if schur_b <= DEFAULT_PD_TOL * b.abs().max(1.0) || !schur_b.is_finite() {
        return Err(Error::NotPartialPd {
            clique: trailing_clique(),
        });
    }
    Ok(FeasibilityInterval {
        position: (lo, hi),
        center,
        half_width: (schur_a * schur_b).sqrt(),
    })
}

/// Interval for `pos` when it is the only unspecified entry of `a`.
pub fn feasibility_range(a: &PartialMatrix, pos: (usize, usize)) -> Result<FeasibilityInterval> {
    let (i, j) = (pos.0.min(pos.1), pos.0.max(pos.1));
    check_position(a.n(), i, j)?;
    let missing = a.missing_positions();
    if missing != [(i, j)] {
        return Err(Error::InvalidIndex(format!(
            "({}, {}) must be the only missing entry; missing: {:?}",
            i + 1,
            j + 1,
            missing
                .iter()
                .map(|&(p, q)| (p + 1, q + 1))
                .collect::<Vec<_>>()
        )));
    }
    single_entry_interval(&a.filled(0.0), i, j)
}

/// Sets entry `(i, j)` of `m` to its determinant-maximising value.
pub fn coordinate_step(m: &mut SymMatrix, i: usize, j: usize) -> Result<FeasibilityInterval> {
    let iv = single_entry_interval(m, i, j)?;
    m.set(i, j, iv.center);
    Ok(iv)
}

/// `(max |(M⁻¹)ᵢⱼ| over positions, ‖M⁻¹‖)`.
pub fn inverse_residual(m: &SymMatrix, positions: &[(usize, usize)]) -> Result<(f64, f64)> {
    let e = m.eig_pd()?;
    let inv = SymMatrix::from_decomp(&e, |x| 1.0 / x);
    let inv_norm = 1.0 / e.values[e.dim() - 1];
    let residual = positions
        .iter()
        .map(|&(i, j)| inv.get(i, j).abs())
        .fold(0.0, f64::max);
    Ok((residual, inv_norm))
}

/// Fills missing entries vertex by vertex in reverse elimination order.
///
/// Each new vertex `v` is specified against the clique `K` of its already
/// placed neighbours; its entry with an already placed non-neighbour `u` is
/// set to `a_vK · M_KK⁻¹ · M_Ku`. Every step keeps the placed block positive
/// definite because the Schur complement of `v` equals that of the clique
/// block `{v} ∪ K`.
pub fn elimination_fill(a: &PartialMatrix, order: &[usize]) -> Result<SymMatrix> {
    let n = a.n();
    let mut m = a.filled(0.0);
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    for &v in order.iter().rev() {
        let clique: Vec<usize> = placed
            .iter()
            .copied()
            .filter(|&u| a.pattern().has_edge(v, u))
            .collect();
        let others: Vec<usize> = placed
            .iter()
            .copied()
            .filter(|&u| !a.pattern().has_edge(v, u))
            .collect();
        if !others.is_empty() && !clique.is_empty() {
            let block = m.principal(&clique);
            let a_kv = DVector::from_iterator(clique.len(), clique.iter().map(|&k| m.get(k, v)));
            let coeffs = block.solve_pd(&a_kv).map_err(|_| Error::NotPartialPd {
                clique: {
                    let mut c = clique.clone();
                    c.sort_unstable();
                    c
                },
            })?;
            for &u in &others {
                let value: f64 = clique
                    .iter()
                    .zip(coeffs.iter())
                    .map(|(&k, &c)| c * m.get(k, u))
                    .sum();
                m.set(v, u, value);
            }
        }
        placed.push(v);
    }
    Ok(m)
}

/// Maximum-determinant positive definite completion by cyclic single-entry
/// updates over the missing positions in row-major order.
///
/// A run that hits `max_cycles` is returned with `converged == false`; call
/// [`CompletionReport::require_converged`] to treat that as an error.
pub fn max_det_completion(a: &PartialMatrix, opts: &CompletionOptions) -> Result<CompletionReport> {
    if let Some(clique) = a.non_pd_clique(opts.pd_tol) {
        return Err(Error::NotPartialPd { clique });
    }
    let missing = a.missing_positions();
    if missing.is_empty() {
        let matrix = a.filled(0.0);
        let (_, inverse_norm) = inverse_residual(&matrix, &[])?;
        return Ok(CompletionReport {
            determinant: matrix.det(),
            matrix,
            iterations: 0,
            residual: 0.0,
            inverse_norm,
            converged: true,
            initial_fill: InitialFill::None,
        });
    }

    let zero = a.filled(0.0);
    let (mut m, initial_fill) = if zero.is_pd(opts.pd_tol) {
        (zero, InitialFill::Zero)
    } else {
        match a.pattern().chordality() {
            Chordality::Chordal(order) => {
                let m = elimination_fill(a, &order.order)?;
                if !m.is_pd(opts.pd_tol) {
                    return Err(Error::NotCompletable(
                        "elimination-order fill lost positive definiteness".into(),
                    ));
                }
                (m, InitialFill::EliminationOrder)
            }
            Chordality::NotChordal(cycle) => {
                return Err(Error::NotCompletable(format!(
                    "pattern has the chordless cycle {:?} and the zero fill is not positive definite",
                    cycle.iter().map(|v| v + 1).collect::<Vec<_>>()
                )))
            }
        }
    };

    let mut iterations = 0;
    loop {
        let (residual, inverse_norm) = inverse_residual(&m, &missing)
            .map_err(|e| Error::NotCompletable(format!("iterate left the cone: {e}")))?;
        let converged = residual <= opts.tol * inverse_norm;
        if converged || iterations >= opts.max_cycles {
            if !converged {
                log::warn!(
                    "max-det completion stopped after {iterations} cycles, residual {residual:e}"
                );
            }
            return Ok(CompletionReport {
                determinant: m.det(),
                matrix: m,
                iterations,
                residual,
                inverse_norm,
                converged,
                initial_fill,
            });
        }
        for &(i, j) in &missing {
            coordinate_step(&mut m, i, j).map_err(|e| {
                Error::NotCompletable(format!(
                    "single-entry subproblem at ({}, {}) is infeasible: {e}",
                    i + 1,
                    j + 1
                ))
            })?;
        }
        iterations += 1;
    }
}

/// A positive definite completion with determinant `k`, for `0 < k < det(Â)`.
///
/// Starts at the maximum-determinant completion and bisects along the first
/// missing entry towards the upper endpoint of its feasibility interval,
/// where the completion becomes singular.
pub fn completion_with_det(a: &PartialMatrix, k: f64, opts: &CompletionOptions) -> Result<SymMatrix> {
    let best = max_det_completion(a, opts)?.require_converged()?;
    let missing = a.missing_positions();
    if missing.is_empty() {
        return Err(Error::OutOfRange(
            "a fully specified matrix has a single completion".into(),
        ));
    }
    if !(k > 0.0 && k < best.determinant) {
        return Err(Error::OutOfRange(format!(
            "target determinant {k} is outside (0, {})",
            best.determinant
        )));
    }
    let (i, j) = missing[0];
    let iv = single_entry_interval(&best.matrix, i, j)?;
    let at = |s: f64| {
        let mut m = best.matrix.clone();
        m.set(i, j, iv.center + s * iv.half_width);
        m
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut m = at(0.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        m = at(mid);
        let d = m.det();
        if (d - k).abs() <= 1e-12 * k || mid == lo || mid == hi {
            break;
        }
        if d > k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(m)
}

/// Product bound `det(Â)·det(B̂)` for a block-diagonal pattern whose
/// off-diagonal block (rows `0..split` against `split..n`) is fully missing.
#[derive(Debug, Clone, PartialEq)]
pub struct FischerBound {
    pub bound: f64,
    pub leading: CompletionReport,
    pub trailing: CompletionReport,
}

pub fn fischer_bound(h: &PartialMatrix, split: usize, opts: &CompletionOptions) -> Result<FischerBound> {
    let n = h.n();
    if split == 0 || split >= n {
        return Err(Error::InvalidIndex(format!(
            "block split {split} must lie strictly inside 0..{n}"
        )));
    }
    for i in 0..split {
        for j in split..n {
            if h.get(i, j).is_some() {
                return Err(Error::InvalidIndex(format!(
                    "off-diagonal block entry ({}, {}) is specified",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let top: Vec<usize> = (0..split).collect();
    let bottom: Vec<usize> = (split..n).collect();
    let leading = max_det_completion(&h.principal(&top)?, opts)?.require_converged()?;
    let trailing = max_det_completion(&h.principal(&bottom)?, opts)?.require_converged()?;
    Ok(FischerBound {
        bound: leading.determinant * trailing.determinant,
        leading,
        trailing,
    })
}
