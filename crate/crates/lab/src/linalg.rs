//! Sparse symmetric positive-definite solves: reverse Cuthill–McKee ordering
//! followed by an envelope (skyline) Cholesky factorization. Graph Laplacians
//! of paths, trees, strips and grids have small envelopes under this ordering.

use std::collections::VecDeque;

use crate::error::{LabError, Result};

/// Symmetric matrix assembled from entries; off-diagonal entries are stored
/// once per unordered pair and mirrored implicitly.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    diag: Vec<f64>,
    /// Per row: `(column, value)` for every off-diagonal neighbour (both halves).
    off: Vec<Vec<(usize, f64)>>,
}

impl SymMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            diag: vec![0.0; n],
            off: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_diag(&mut self, i: usize, v: f64) {
        self.diag[i] += v;
    }

    /// Adds `v` at `(i, j)` and `(j, i)` for `i ≠ j`.
    pub fn add_off(&mut self, i: usize, j: usize, v: f64) {
        debug_assert_ne!(i, j);
        match self.off[i].iter_mut().find(|(c, _)| *c == j) {
            Some(slot) => slot.1 += v,
            None => {
                self.off[i].push((j, v));
                self.off[j].push((i, 0.0));
            }
        }
        let back = self.off[j].iter_mut().find(|(c, _)| *c == i).expect("mirrored entry");
        back.1 += v;
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.diag[i] * x[i] + self.off[i].iter().map(|&(j, v)| v * x[j]).sum::<f64>())
            .collect()
    }
}

/// Reverse Cuthill–McKee permutation: `order[k]` is the original index placed
/// at position `k`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree = |v: usize| adj[v].len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let bfs_levels = |start: usize, mask: &[bool]| -> (Vec<usize>, usize) {
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut q = VecDeque::from([start]);
        let mut seen = vec![start];
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if !mask[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    seen.push(w);
                    q.push_back(w);
                }
            }
        }
        let last = *seen
            .iter()
            .max_by(|&&a, &&b| dist[a].cmp(&dist[b]).then(degree(b).cmp(&degree(a))))
            .unwrap_or(&start);
        (seen, last)
    };
    while order.len() < n {
        let seed = (0..n).filter(|&v| !placed[v]).min_by_key(|&v| degree(v)).expect("unplaced vertex");
        // pseudo-peripheral start: end of a BFS sweep from the minimum-degree seed
        let (_, far) = bfs_levels(seed, &placed);
        let start = far;
        let begin = order.len();
        placed[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            nbrs.sort_by_key(|&w| (degree(w), w));
            nbrs.dedup();
            for w in nbrs {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Envelope Cholesky factor `P A Pᵀ = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    order: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of each row's first stored entry in `vals`.
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.len();
        let adj: Vec<Vec<usize>> = a.off.iter().map(|r| r.iter().map(|&(j, _)| j).collect()).collect();
        let order = reverse_cuthill_mckee(&adj);
        let mut pos = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let first: Vec<usize> = (0..n)
            .map(|k| {
                a.off[order[k]]
                    .iter()
                    .map(|&(j, _)| pos[j])
                    .filter(|&c| c < k)
                    .min()
                    .unwrap_or(k)
            })
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for k in 0..n {
            start.push(total);
            total += k - first[k] + 1;
        }
        start.push(total);
        let mut vals = vec![0.0; total];
        for k in 0..n {
            let v = order[k];
            vals[start[k] + (k - first[k])] = a.diag[v];
            for &(j, x) in &a.off[v] {
                let c = pos[j];
                if c < k {
                    vals[start[k] + (c - first[k])] += x;
                }
            }
        }
        for i in 0..n {
            for j in first[i]..=i {
                let lo = first[i].max(first[j]);
                let orig = vals[start[i] + (j - first[i])];
                let mut s = orig;
                let ri = start[i] + (lo - first[i]);
                let rj = start[j] + (lo - first[j]);
                for t in 0..(j - lo) {
                    s -= vals[ri + t] * vals[rj + t];
                }
                if j < i {
                    vals[start[i] + (j - first[i])] = s / vals[start[j] + (j - first[j])];
                } else {
                    if !(s > 1e-13 * orig.abs()) {
                        return Err(LabError::Solver(format!("matrix is not positive definite (pivot {s:e} at row {i})")));
                    }
                    vals[start[i] + (i - first[i])] = s.sqrt();
                }
            }
        }
        Ok(Self { order, first, start, vals })
    }

    fn l(&self, i: usize, j: usize) -> f64 {
        self.vals[self.start[i] + (j - self.first[i])]
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order.len();
        let mut y: Vec<f64> = self.order.iter().map(|&v| b[v]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in self.first[i]..i {
                s -= self.l(i, j) * y[j];
            }
            y[i] = s / self.l(i, i);
        }
        for i in (0..n).rev() {
            y[i] /= self.l(i, i);
            let yi = y[i];
            for j in self.first[i]..i {
                y[j] -= self.l(i, j) * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &v) in self.order.iter().enumerate() {
            x[v] = y[k];
        }
        x
    }

    /// Stored entries; a measure of fill.
    pub fn envelope_size(&self) -> usize {
        self.vals.len()
    }
}
