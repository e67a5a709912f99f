//! Grid sweeps of `A(x) #ₜ B(y)` over the feasible values of the missing
//! entries, written as CSV.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::completion::{feasibility_range, single_entry_interval, FeasibilityInterval};
use crate::error::{Error, Result};
use crate::format::format_exact;
use crate::linalg::{SymMatrix, DEFAULT_PD_TOL};
use crate::means::geomean;
use crate::partial::PartialMatrix;

/// Relative amount by which each feasibility interval is shrunk before
/// gridding, so the grid stays inside the open interval.
pub const EDGE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub a: PartialMatrix,
    pub b: PartialMatrix,
    /// Points per axis.
    pub grid: usize,
    pub t: f64,
}

impl SweepSpec {
    pub fn new(a: PartialMatrix, b: PartialMatrix) -> Self {
        SweepSpec {
            a,
            b,
            grid: 101,
            t: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    A,
    B,
}

/// One swept entry and the interval its grid covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweptEntry {
    pub operand: Operand,
    pub position: (usize, usize),
    pub range: FeasibilityInterval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub y: Option<f64>,
    /// `None` when a filled operand is not positive definite.
    pub det: Option<f64>,
    /// Eigenvalues of the mean in non-increasing order; empty when infeasible.
    pub eigenvalues: Vec<f64>,
}

impl SweepRow {
    pub fn is_feasible(&self) -> bool {
        self.det.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub entries: Vec<SweptEntry>,
    /// Cells in x-major order.
    pub rows: Vec<SweepRow>,
}

/// Values of `x` for which some completion of the remaining entries can be
/// positive definite: the intersection over the maximal cliques of the
/// enlarged pattern that contain the entry of the single-entry intervals.
fn projected_range(m: &PartialMatrix, pos: (usize, usize)) -> Result<FeasibilityInterval> {
    let (i, j) = pos;
    let mut pattern = m.pattern().clone();
    pattern.insert(i, j)?;
    let fallback = FeasibilityInterval {
        position: pos,
        center: 0.0,
        half_width: (m.get(i, i).unwrap_or(0.0) * m.get(j, j).unwrap_or(0.0)).sqrt(),
    };
    if !pattern.is_chordal() {
        return Ok(fallback);
    }
    let dense = m.filled(0.0);
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for clique in pattern.maximal_cliques() {
        let (Some(li), Some(lj)) = (
            clique.iter().position(|&v| v == i),
            clique.iter().position(|&v| v == j),
        ) else {
            continue;
        };
        let iv = single_entry_interval(&dense.principal(&clique), li, lj)?;
        lower = lower.max(iv.lower());
        upper = upper.min(iv.upper());
    }
    if lower.partial_cmp(&upper) != Some(std::cmp::Ordering::Less) {
        return Err(Error::NotCompletable(format!(
            "entry ({}, {}) has an empty feasible range",
            i + 1,
            j + 1
        )));
    }
    Ok(FeasibilityInterval {
        position: pos,
        center: 0.5 * (lower + upper),
        half_width: 0.5 * (upper - lower),
    })
}

fn entry_range(m: &PartialMatrix, pos: (usize, usize)) -> Result<FeasibilityInterval> {
    if m.missing_positions().len() == 1 {
        feasibility_range(m, pos)
    } else {
        projected_range(m, pos)
    }
}

/// Swept entries in order: those of `A` first, then those of `B`, each in
/// row-major order.
pub fn swept_entries(a: &PartialMatrix, b: &PartialMatrix) -> Result<Vec<SweptEntry>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let total = a.missing_positions().len() + b.missing_positions().len();
    if total > 2 {
        return Err(Error::TooManyMissing(total));
    }
    if total == 0 {
        return Err(Error::NothingToSweep);
    }
    let mut out = Vec::with_capacity(total);
    for (operand, m) in [(Operand::A, a), (Operand::B, b)] {
        for pos in m.missing_positions() {
            out.push(SweptEntry {
                operand,
                position: pos,
                range: entry_range(m, pos)?,
            });
        }
    }
    Ok(out)
}

/// `grid` points covering `range` shrunk by [`EDGE_MARGIN`]; the offsets
/// from the centre are exactly antisymmetric.
pub fn grid_points(range: &FeasibilityInterval, grid: usize) -> Vec<f64> {
    let half = range.half_width * (1.0 - EDGE_MARGIN);
    let last = (grid - 1) as f64;
    (0..grid)
        .map(|k| {
            let u = (2.0 * k as f64 - last) / last;
            range.center + half * u
        })
        .collect()
}

fn evaluate(
    spec: &SweepSpec,
    entries: &[SweptEntry],
    values: &[f64],
) -> Result<(Option<f64>, Vec<f64>)> {
    let mut a = spec.a.filled(0.0);
    let mut b = spec.b.filled(0.0);
    for (e, &v) in entries.iter().zip(values) {
        let target: &mut SymMatrix = match e.operand {
            Operand::A => &mut a,
            Operand::B => &mut b,
        };
        target.set(e.position.0, e.position.1, v);
    }
    if !a.is_pd(DEFAULT_PD_TOL) || !b.is_pd(DEFAULT_PD_TOL) {
        return Ok((None, Vec::new()));
    }
    let m = geomean(&a, &b, spec.t)?;
    Ok((Some(m.det()), m.eigenvalues()?))
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.grid < 2 {
        return Err(Error::OutOfRange(format!(
            "grid must have at least 2 points, got {}",
            spec.grid
        )));
    }
    let entries = swept_entries(&spec.a, &spec.b)?;
    let xs = grid_points(&entries[0].range, spec.grid);
    let ys = entries.get(1).map(|e| grid_points(&e.range, spec.grid));
    let cells: Vec<(f64, Option<f64>)> = match &ys {
        Some(ys) => xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, Some(y))))
            .collect(),
        None => xs.iter().map(|&x| (x, None)).collect(),
    };
    let rows = cells
        .par_iter()
        .map(|&(x, y)| {
            let values: Vec<f64> = std::iter::once(x).chain(y).collect();
            let (det, eigenvalues) = evaluate(spec, &entries, &values)?;
            Ok(SweepRow {
                x,
                y,
                det,
                eigenvalues,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        n: spec.a.n(),
        entries,
        rows,
    })
}

impl SweepResult {
    /// CSV with columns `x,y,det,eig_1,...,eig_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,det");
        for k in 1..=self.n {
            let _ = write!(out, ",eig_{k}");
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format_exact(row.x));
            out.push(',');
            if let Some(y) = row.y {
                out.push_str(&format_exact(y));
            }
            match row.det {
                Some(d) => {
                    let _ = write!(out, ",{}", format_exact(d));
                    for e in &row.eigenvalues {
                        let _ = write!(out, ",{}", format_exact(*e));
                    }
                }
                None => {
                    for _ in 0..=self.n {
                        out.push_str(",nan");
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Feasible row with the largest determinant.
    pub fn argmax_det(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.det.is_some())
            .max_by(|p, q| p.det.partial_cmp(&q.det).expect("finite determinants"))
    }
}
