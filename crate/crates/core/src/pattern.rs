//! Specified-entry patterns: undirected graphs on `0..n` with every loop present.
//!
//! Indices are 0-based throughout the library. Text output and the CLI convert
//! to the 1-based vertex labels used when writing matrices by hand.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Undirected graph with all loops, stored as a dense adjacency matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Pattern {
    n: usize,
    adj: Vec<bool>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        write!(f, "Pattern(n={}, edges={:?})", self.n, edges)
    }
}

/// A vertex permutation; a perfect elimination ordering when produced by
/// [`Pattern::chordality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// Witnessed by a perfect elimination ordering.
    Chordal(EliminationOrder),
    /// Witnessed by a chordless cycle of length at least four.
    NotChordal(Vec<usize>),
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal(_))
    }
}

impl Pattern {
    /// Builds a pattern from off-diagonal edges; loops are always added.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut p = Self {
            n,
            adj: vec![false; n * n],
        };
        for i in 0..n {
            p.adj[i * n + i] = true;
        }
        for (i, j) in edges {
            p.insert(i, j)?;
        }
        Ok(p)
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            adj: vec![true; n * n],
        }
    }

    /// Complete graph with the listed positions removed.
    pub fn with_missing(n: usize, missing: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::complete(n);
        for &(i, j) in missing {
            p.check_index(i)?;
            p.check_index(j)?;
            if i == j {
                return Err(Error::MissingDiagonal(i + 1));
            }
            p.adj[i * n + j] = false;
            p.adj[j * n + i] = false;
        }
        Ok(p)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidIndex(format!(
                "vertex {} in a pattern of size {}",
                i + 1,
                self.n
            )));
        }
        Ok(())
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// Off-diagonal edges `(i, j)` with `i < j`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Neighbours of `v`, excluding `v` itself, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&u| u != v && self.has_edge(v, u))
            .collect()
    }

    /// Unspecified positions `(i, j)` with `i < j`, in row-major order.
    pub fn missing_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|&b| b)
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(k, &a)| vertices[k + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Maximum cardinality search. The returned order lists vertices in
    /// reverse visiting order, which is a perfect elimination ordering exactly
    /// when the graph is chordal.
    pub fn mcs_order(&self) -> EliminationOrder {
        let n = self.n;
        let mut weight = vec![0usize; n];
        let mut numbered = vec![false; n];
        let mut visit = Vec::with_capacity(n);
        for _ in 0..n {
            // Ties go to the smallest label so the order is deterministic.
            let v = (0..n)
                .filter(|&v| !numbered[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .expect("unnumbered vertex remains");
            numbered[v] = true;
            visit.push(v);
            for u in self.neighbors(v) {
                if !numbered[u] {
                    weight[u] += 1;
                }
            }
        }
        visit.reverse();
        EliminationOrder { order: visit }
    }

    /// Checks that every vertex's later neighbours in `order` form a clique.
    pub fn is_perfect_elimination_order(&self, order: &EliminationOrder) -> bool {
        let n = self.n;
        if order.order.len() != n {
            return false;
        }
        let mut pos = vec![usize::MAX; n];
        for (k, &v) in order.order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = k;
        }
        order.order.iter().all(|&v| {
            let later: Vec<usize> = self
                .neighbors(v)
                .into_iter()
                .filter(|&u| pos[u] > pos[v])
                .collect();
            self.is_clique(&later)
        })
    }

    /// Decides chordality with a witness either way.
    pub fn chordality(&self) -> Chordality {
        let order = self.mcs_order();
        if self.is_perfect_elimination_order(&order) {
            return Chordality::Chordal(order);
        }
        Chordality::NotChordal(
            self.chordless_cycle()
                .expect("a graph without a perfect elimination ordering has a chordless cycle"),
        )
    }

    pub fn is_chordal(&self) -> bool {
        self.chordality().is_chordal()
    }

    /// Completable patterns are exactly the chordal ones.
    pub fn is_completable(&self) -> bool {
        self.is_chordal()
    }

    /// Finds a chordless cycle of length ≥ 4, if one exists.
    ///
    /// For each vertex `v` and each non-adjacent pair `a`, `b` of its
    /// neighbours, a shortest `a`–`b` path that avoids every other vertex of
    /// the closed neighbourhood of `v` closes a chordless cycle through `v`.
    pub fn chordless_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n;
        for v in 0..n {
            let nb = self.neighbors(v);
            for (k, &a) in nb.iter().enumerate() {
                for &b in &nb[k + 1..] {
                    if self.has_edge(a, b) {
                        continue;
                    }
                    let mut blocked = vec![false; n];
                    blocked[v] = true;
                    for &u in &nb {
                        if u != a && u != b {
                            blocked[u] = true;
                        }
                    }
                    if let Some(path) = self.shortest_path(a, b, &blocked) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }

    fn shortest_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        let n = self.n;
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            if x == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in self.neighbors(x) {
                if !seen[y] && !blocked[y] {
                    seen[y] = true;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Maximal cliques, each sorted ascending, the list sorted lexicographically.
    ///
    /// Chordal patterns use the elimination ordering; other patterns fall back
    /// to Bron–Kerbosch enumeration.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut cliques = match self.chordality() {
            Chordality::Chordal(order) => self.peo_cliques(&order),
            Chordality::NotChordal(_) => self.bron_kerbosch(),
        };
        for c in &mut cliques {
            c.sort_unstable();
        }
        cliques.sort();
        cliques.dedup();
        cliques
    }

    fn peo_cliques(&self, order: &EliminationOrder) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut pos = vec![0; n];
        for (k, &v) in order.order.iter().enumerate() {
            pos[v] = k;
        }
        let candidates: Vec<Vec<usize>> = order
            .order
            .iter()
            .map(|&v| {
                let mut c: Vec<usize> = self
                    .neighbors(v)
                    .into_iter()
                    .filter(|&u| pos[u] > pos[v])
                    .collect();
                c.push(v);
                c.sort_unstable();
                c
            })
            .collect();
        candidates
            .iter()
            .enumerate()
            .filter(|(k, c)| {
                !candidates.iter().enumerate().any(|(m, d)| {
                    m != *k
                        && d.len() >= c.len()
                        && c.iter().all(|x| d.contains(x))
                        && (d.len() > c.len() || m < *k)
                })
            })
            .map(|(_, c)| c.clone())
            .collect()
    }

    fn bron_kerbosch(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.bk_pivot(
            Vec::new(),
            (0..self.n).collect(),
            Vec::new(),
            &mut out,
        );
        out
    }

    fn bk_pivot(&self, r: Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&w| w != u && self.has_edge(u, w)).count())
            .expect("p or x non-empty");
        let mut p = p;
        let mut x = x;
        let candidates: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&v| v == pivot || !self.has_edge(pivot, v))
            .collect();
        for v in candidates {
            let nv = |w: &usize| *w != v && self.has_edge(v, *w);
            let mut r2 = r.clone();
            r2.push(v);
            let p2 = p.iter().copied().filter(nv).collect();
            let x2 = x.iter().copied().filter(nv).collect();
            self.bk_pivot(r2, p2, x2, out);
            p.retain(|&w| w != v);
            x.push(v);
        }
    }

    /// Disjoint union with `other` placed after this pattern's vertices.
    pub fn disjoint_union(&self, other: &Pattern) -> Pattern {
        let n = self.n + other.n;
        let mut adj = vec![false; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                adj[i * n + j] = self.has_edge(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                adj[(i + self.n) * n + j + self.n] = other.has_edge(i, j);
            }
        }
        Pattern { n, adj }
    }
}
