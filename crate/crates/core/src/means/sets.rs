use rayon::prelude::*;

use super::geomean;
use crate::error::{Error, Result};
use crate::linalg::{check_same_dim, SymMatrix, DEFAULT_PD_TOL};

const DEDUP_TOL: f64 = 1e-12;

/// A finite, non-empty set of positive definite matrices of one size.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    members: Vec<SymMatrix>,
}

impl SampleSet {
    pub fn new(members: Vec<SymMatrix>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptySampleSet)?;
        for m in &members {
            check_same_dim(first, m)?;
            if !m.is_pd(DEFAULT_PD_TOL) {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: m.min_eigenvalue()?,
                });
            }
        }
        Ok(SampleSet { members })
    }

    pub fn members(&self) -> &[SymMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].n()
    }

    pub fn scale(&self, alpha: f64) -> Result<Self> {
        Self::new(self.members.iter().map(|m| alpha * m).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.members.iter().map(|m| m.inverse()).collect::<Result<_>>()?)
    }

    /// Membership up to Frobenius distance `tol`.
    pub fn contains(&self, m: &SymMatrix, tol: f64) -> bool {
        self.members
            .iter()
            .any(|x| x.n() == m.n() && (x - m).fro_norm() <= tol)
    }
}

/// `{ S #ₜ T : S ∈ 𝒮, T ∈ 𝒯 }`, with near-duplicates dropped.
pub fn set_geomean(s: &SampleSet, t_set: &SampleSet, t: f64) -> Result<SampleSet> {
    if s.dim() != t_set.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: t_set.dim(),
        });
    }
    let pairs: Vec<(&SymMatrix, &SymMatrix)> = s
        .members
        .iter()
        .flat_map(|a| t_set.members.iter().map(move |b| (a, b)))
        .collect();
    let means = pairs
        .par_iter()
        .map(|(a, b)| geomean(a, b, t))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<SymMatrix> = Vec::with_capacity(means.len());
    for m in means {
        if !out.iter().any(|x| (x - &m).fro_norm() <= DEDUP_TOL) {
            out.push(m);
        }
    }
    Ok(SampleSet { members: out })
}
