#![allow(dead_code)]

use nalgebra::DMatrix;
use pgm_core::partial::project;
use pgm_core::{PartialMatrix, Pattern, SymMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `G Gᵀ / n + shift · I` with standard normal `G`.
pub fn random_pd_shifted(rng: &mut impl Rng, n: usize, shift: f64) -> SymMatrix {
    let g = gaussian_matrix(rng, n, n);
    let m = &g * g.transpose() / n as f64 + DMatrix::identity(n, n) * shift;
    SymMatrix::symmetrize(&m).unwrap()
}

pub fn random_pd(rng: &mut impl Rng, n: usize) -> SymMatrix {
    random_pd_shifted(rng, n, 0.2)
}

/// Random positive semidefinite matrix of rank `n − 1` or so.
pub fn random_psd(rng: &mut impl Rng, n: usize) -> SymMatrix {
    let g = gaussian_matrix(rng, n, n.saturating_sub(1).max(1));
    SymMatrix::symmetrize(&(&g * g.transpose() / n as f64)).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    loop {
        let s = gaussian_matrix(rng, n, n) + DMatrix::identity(n, n);
        if s.determinant().abs() > 0.1 {
            return s;
        }
    }
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Pattern {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Pattern::new(n, edges).unwrap()
}

/// A random graph made chordal by the elimination game along a random
/// vertex order.
pub fn random_chordal_pattern(rng: &mut impl Rng, n: usize, p: f64) -> Pattern {
    let mut g = random_graph(rng, n, p);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut eliminated = vec![false; n];
    for &v in &order {
        let later: Vec<usize> = g
            .neighbors(v)
            .into_iter()
            .filter(|&u| u != v && !eliminated[u])
            .collect();
        for (k, &a) in later.iter().enumerate() {
            for &b in &later[k + 1..] {
                g.insert(a, b).unwrap();
            }
        }
        eliminated[v] = true;
    }
    g
}

/// A chordal pattern with between `min_missing` and `max_missing` missing
/// entries, found by rejection.
pub fn random_chordal_with_missing(
    rng: &mut impl Rng,
    n: usize,
    min_missing: usize,
    max_missing: usize,
) -> Pattern {
    loop {
        let p = rng.random_range(0.2..0.9);
        let g = random_chordal_pattern(rng, n, p);
        let k = g.missing_positions().len();
        if (min_missing..=max_missing).contains(&k) {
            return g;
        }
    }
}

/// Projection of a random PD matrix onto `pattern`; partial PD by
/// construction.
pub fn random_partial_pd(rng: &mut impl Rng, pattern: &Pattern) -> PartialMatrix {
    project(&random_pd(rng, pattern.n()), pattern).unwrap()
}

pub fn example1_a() -> PartialMatrix {
    pgm_core::format::parse_partial("n 3\n3 -1 ?\n-1 3 2\n? 2 4\n").unwrap()
}

pub fn example1_b() -> PartialMatrix {
    pgm_core::format::parse_partial("n 3\n4 3 ?\n3 5 -1\n? -1 2\n").unwrap()
}

pub fn example2_a() -> PartialMatrix {
    pgm_core::format::parse_partial(
        "n 5\n3 -1 1 1 ?\n-1 3 -1 1 0\n1 -1 3 2 1\n1 1 2 4 2\n? 0 1 2 4\n",
    )
    .unwrap()
}

pub fn example2_b() -> PartialMatrix {
    pgm_core::format::parse_partial(
        "n 5\n3 0 1 2 ?\n0 1 0 -1 0\n1 0 5 -1 1\n2 -1 -1 3 0\n? 0 1 0 4\n",
    )
    .unwrap()
}

/// `I_n` with the corner pair `(1, n)` missing.
pub fn identity_corner(n: usize) -> PartialMatrix {
    let p = Pattern::with_missing(n, &[(0, n - 1)]).unwrap();
    PartialMatrix::from_dense(p, SymMatrix::identity(n).as_matrix().as_slice()).unwrap()
}

pub fn example4_a() -> PartialMatrix {
    pgm_core::format::parse_partial("n 3\n2 1 ?\n1 2 ?\n? ? 2\n").unwrap()
}

pub fn example4_b() -> PartialMatrix {
    pgm_core::format::parse_partial("n 3\n4 3 0\n3 5 -1\n0 -1 2\n").unwrap()
}

pub fn non_chordal_n() -> PartialMatrix {
    pgm_core::format::parse_partial("n 4\n1 -1 ? 0\n-1 2 2 ?\n? 2 3 1\n0 ? 1 1\n").unwrap()
}

/// Determinant by plain Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn det_oracle(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}
