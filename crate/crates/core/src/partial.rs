//! Partial symmetric matrices over a [`Pattern`], their definiteness, algebra
//! and the partial Loewner order.

use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::pattern::Pattern;

/// Values on the specified positions of a pattern.
///
/// Values are keyed by unordered pair, so symmetry holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatrix {
    pattern: Pattern,
    // Dense n×n storage; unspecified positions hold 0.0 and are never exposed.
    values: Vec<f64>,
}

/// Outcome of comparing two partial matrices in the partial Loewner order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Incomparable,
}

impl PartialMatrix {
    /// Builds a partial matrix from a full array of values, keeping only the
    /// positions specified by `pattern`. Specified values must be symmetric.
    pub fn from_dense(pattern: Pattern, dense: &[f64]) -> Result<Self> {
        let n = pattern.n();
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: dense.len(),
            });
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if pattern.has_edge(i, j) {
                    if dense[i * n + j] != dense[j * n + i] {
                        return Err(Error::Asymmetric {
                            row: i.min(j),
                            col: i.max(j),
                        });
                    }
                    values[i * n + j] = dense[i * n + j];
                }
            }
        }
        Ok(Self { pattern, values })
    }

    /// Builds from rows where `None` marks a missing entry; the pattern is
    /// inferred from the `None` positions.
    pub fn from_options(rows: &[Vec<Option<f64>>]) -> Result<Self> {
        let n = rows.len();
        let mut missing = Vec::new();
        let mut dense = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, entry) in row.iter().enumerate() {
                match (entry, rows[j].get(i).copied().flatten()) {
                    (None, _) if i == j => return Err(Error::MissingDiagonal(i + 1)),
                    (Some(_), None) | (None, Some(_)) => {
                        return Err(Error::AsymmetricPattern {
                            row: i.min(j) + 1,
                            col: i.max(j) + 1,
                        })
                    }
                    (None, None) => {
                        if i < j {
                            missing.push((i, j));
                        }
                    }
                    (Some(v), Some(_)) => dense[i * n + j] = *v,
                }
            }
        }
        let pattern = Pattern::with_missing(n, &missing)?;
        Self::from_dense(pattern, &dense)
    }

    /// Fully specified partial matrix.
    pub fn from_full(m: &SymMatrix) -> Self {
        project(m, &Pattern::complete(m.n())).expect("dimensions agree")
    }

    pub fn zeros(pattern: Pattern) -> Self {
        let n = pattern.n();
        Self {
            pattern,
            values: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.pattern
            .has_edge(i, j)
            .then(|| self.values[i * self.n() + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if !self.pattern.has_edge(i, j) {
            return Err(Error::InvalidIndex(format!(
                "({}, {}) is not a specified position",
                i + 1,
                j + 1
            )));
        }
        let n = self.n();
        self.values[i * n + j] = value;
        self.values[j * n + i] = value;
        Ok(())
    }

    /// Turns a missing position into a specified one with the given value.
    pub fn specify(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        let mut pattern = self.pattern.clone();
        pattern.insert(i, j)?;
        let n = self.n();
        let mut values = self.values.clone();
        values[i * n + j] = value;
        values[j * n + i] = value;
        Ok(Self { pattern, values })
    }

    pub fn missing_positions(&self) -> Vec<(usize, usize)> {
        self.pattern.missing_positions()
    }

    /// The full matrix with every missing entry set to `fill`.
    pub fn filled(&self, fill: f64) -> SymMatrix {
        let n = self.n();
        SymMatrix::from_upper_fn(n, |i, j| self.get(i, j).unwrap_or(fill))
    }

    /// Principal submatrix on a clique of the pattern.
    pub fn clique_block(&self, clique: &[usize]) -> SymMatrix {
        debug_assert!(self.pattern.is_clique(clique));
        let k = clique.len();
        SymMatrix::from_upper_fn(k, |a, b| self.values[clique[a] * self.n() + clique[b]])
    }

    /// First maximal clique whose block fails `accept`, if any.
    fn failing_clique(&self, accept: impl Fn(&SymMatrix) -> bool) -> Option<Vec<usize>> {
        self.pattern
            .maximal_cliques()
            .into_iter()
            .find(|c| !accept(&self.clique_block(c)))
    }

    /// Maximal clique whose block is not positive definite, if any.
    pub fn non_pd_clique(&self, tol: f64) -> Option<Vec<usize>> {
        self.failing_clique(|b| b.is_pd(tol))
    }

    /// Every maximal-clique block is positive definite.
    pub fn is_partial_pd(&self, tol: f64) -> bool {
        self.non_pd_clique(tol).is_none()
    }

    /// Every maximal-clique block is positive semidefinite.
    pub fn is_partial_psd(&self, tol: f64) -> bool {
        self.failing_clique(|b| b.is_psd(tol)).is_none()
    }

    /// Partial principal submatrix on an ordered index set.
    pub fn principal(&self, idx: &[usize]) -> Result<Self> {
        let n = self.n();
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidIndex(format!("row {} of {n}", bad + 1)));
        }
        let k = idx.len();
        let edges = (0..k)
            .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
            .filter(|&(a, b)| self.pattern.has_edge(idx[a], idx[b]));
        let pattern = Pattern::new(k, edges)?;
        let dense: Vec<f64> = (0..k * k)
            .map(|p| self.values[idx[p / k] * n + idx[p % k]])
            .collect();
        Self::from_dense(pattern, &dense)
    }

    /// Block-diagonal arrangement with every off-block entry missing.
    pub fn block_diagonal(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n(), other.n());
        let n = n1 + n2;
        let pattern = self.pattern.disjoint_union(&other.pattern);
        let mut values = vec![0.0; n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                values[i * n + j] = self.values[i * n1 + j];
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                values[(i + n1) * n + j + n1] = other.values[i * n2 + j];
            }
        }
        Self { pattern, values }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            pattern: self.pattern.clone(),
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.pattern != other.pattern {
            return Err(Error::PatternMismatch);
        }
        Ok(Self {
            pattern: self.pattern.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `self + (−1)·other`.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Classifies `self` against `other` in the partial Loewner order.
    pub fn compare(&self, other: &Self, tol: f64) -> Result<Ordering> {
        partial_order(self, other, tol)
    }
}

impl Add for &PartialMatrix {
    type Output = PartialMatrix;
    /// Panics on a pattern mismatch; use [`PartialMatrix::try_add`] to handle it.
    fn add(self, rhs: &PartialMatrix) -> PartialMatrix {
        self.try_add(rhs).expect("partial matrices share a pattern")
    }
}

impl Sub for &PartialMatrix {
    type Output = PartialMatrix;
    fn sub(self, rhs: &PartialMatrix) -> PartialMatrix {
        self.try_sub(rhs).expect("partial matrices share a pattern")
    }
}

impl Neg for &PartialMatrix {
    type Output = PartialMatrix;
    fn neg(self) -> PartialMatrix {
        self.scale(-1.0)
    }
}

/// Partial Loewner order: `A ≥ B` iff `A − B` is partial PSD, `A > B` iff partial PD.
pub fn partial_order(a: &PartialMatrix, b: &PartialMatrix, tol: f64) -> Result<Ordering> {
    let diff = a.try_sub(b)?;
    if diff.is_zero() {
        return Ok(Ordering::Eq);
    }
    if diff.is_partial_pd(tol) {
        return Ok(Ordering::Gt);
    }
    if diff.is_partial_psd(tol) {
        return Ok(Ordering::Ge);
    }
    let neg = -&diff;
    if neg.is_partial_pd(tol) {
        return Ok(Ordering::Lt);
    }
    if neg.is_partial_psd(tol) {
        return Ok(Ordering::Le);
    }
    Ok(Ordering::Incomparable)
}

/// Restricts a full matrix to the specified positions of `pattern`.
pub fn project(m: &SymMatrix, pattern: &Pattern) -> Result<PartialMatrix> {
    if m.n() != pattern.n() {
        return Err(Error::DimensionMismatch {
            expected: pattern.n(),
            found: m.n(),
        });
    }
    let n = m.n();
    let dense: Vec<f64> = (0..n * n).map(|k| m.get(k / n, k % n)).collect();
    PartialMatrix::from_dense(pattern.clone(), &dense)
}

/// True when `m` is a completion of `a`: every specified entry matches within `tol`.
///
/// `SymMatrix` is symmetric by construction, so only the specified entries are compared.
pub fn agrees(m: &SymMatrix, a: &PartialMatrix, tol: f64) -> Result<bool> {
    if m.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: m.n(),
        });
    }
    let n = a.n();
    for i in 0..n {
        for j in i..n {
            if let Some(v) = a.get(i, j) {
                if (m.get(i, j) - v).abs() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
