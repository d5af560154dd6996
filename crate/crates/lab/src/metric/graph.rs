use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{input, LabError, Result};

/// Relative comparison tolerance for lengths: `TOL_GEOM_REL × diameter`.
pub const TOL_GEOM_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

impl Edge {
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected finite graph with positive edge lengths; its shortest-path metric
/// models a geodesic metric space.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    edges: Vec<Edge>,
    /// Per vertex: `(neighbour, edge index)` sorted by neighbour id, then length.
    adj: Vec<Vec<(usize, usize)>>,
    pos: Vec<[f64; 2]>,
    scale: OnceLock<f64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Item {
    d: f64,
    v: usize,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.d.total_cmp(&self.d).then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MetricGraph {
    /// Builds a graph on vertices `0..n`. Rejects self-loops, non-positive or
    /// non-finite lengths and disconnected inputs.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::new_unchecked_connectivity(n, edges)?;
        if !g.is_connected() {
            return Err(input("graph is not connected"));
        }
        Ok(g)
    }

    /// Like [`MetricGraph::new`] but allows several components; used for
    /// restricted subgraphs inside searches.
    pub(crate) fn new_unchecked_connectivity(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(input("graph has no vertices"));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(LabError::UnknownVertex(e.u.max(e.v)));
            }
            if e.u == e.v {
                return Err(input(format!("self-loop at vertex {}", e.u)));
            }
            if !(e.len > 0.0 && e.len.is_finite()) {
                return Err(input(format!(
                    "edge ({}, {}) has non-positive or non-finite length {}",
                    e.u, e.v, e.len
                )));
            }
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for list in &mut adj {
            list.sort_by(|a, b| {
                a.0.cmp(&b.0)
                    .then(edges[a.1].len.total_cmp(&edges[b.1].len))
            });
        }
        Ok(Self {
            edges,
            adj,
            pos: Vec::new(),
            scale: OnceLock::new(),
        })
    }

    pub fn with_positions(mut self, pos: Vec<[f64; 2]>) -> Result<Self> {
        if !pos.is_empty() && pos.len() != self.len() {
            return Err(input("position table length differs from vertex count"));
        }
        self.pos = pos;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// `(neighbour, edge index)` pairs of `v`, sorted by neighbour id.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Coordinates attached by generators; empty when none were recorded.
    pub fn positions(&self) -> &[[f64; 2]] {
        &self.pos
    }

    pub fn position(&self, v: usize) -> Option<[f64; 2]> {
        self.pos.get(v).copied()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(LabError::UnknownVertex(v))
        }
    }

    /// Shortest edge joining `a` and `b`, if adjacent.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let list = &self.adj[a];
        let i = list.partition_point(|&(w, _)| w < b);
        list.get(i).filter(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Sum of the lengths of the edges incident to `v`.
    pub fn incident_length(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, e)| self.edges[e].len).sum()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.len()
    }

    /// Single-source shortest-path distances.
    pub fn sssp(&self, src: usize) -> Vec<f64> {
        self.multi_source(&[(src, 0.0)])
    }

    /// Distances from a set of sources with initial offsets:
    /// `dist(v) = min_s (offset_s + d(s, v))`.
    pub fn multi_source(&self, sources: &[(usize, f64)]) -> Vec<f64> {
        self.dijkstra(sources, |_| true, None)
    }

    /// Distances together with the settle order (nondecreasing distance).
    pub fn sssp_ordered(&self, src: usize) -> (Vec<f64>, Vec<usize>) {
        let mut order = Vec::with_capacity(self.len());
        let d = self.dijkstra(&[(src, 0.0)], |_| true, Some(&mut order));
        (d, order)
    }

    /// Distances from `src` using only vertices accepted by `allowed`.
    pub fn sssp_within(&self, src: usize, allowed: impl Fn(usize) -> bool) -> Vec<f64> {
        self.dijkstra(&[(src, 0.0)], allowed, None)
    }

    fn dijkstra(
        &self,
        sources: &[(usize, f64)],
        allowed: impl Fn(usize) -> bool,
        mut order: Option<&mut Vec<usize>>,
    ) -> Vec<f64> {
        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::with_capacity(n);
        for &(s, off) in sources {
            if allowed(s) && off < dist[s] {
                dist[s] = off;
                heap.push(Item { d: off, v: s });
            }
        }
        while let Some(Item { d, v }) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            if let Some(o) = order.as_deref_mut() {
                o.push(v);
            }
            for &(w, e) in &self.adj[v] {
                if done[w] || !allowed(w) {
                    continue;
                }
                let nd = d + self.edges[e].len;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Item { d: nd, v: w });
                }
            }
        }
        dist
    }

    /// Full distance matrix, row-major. Intended for small graphs.
    pub fn all_pairs(&self) -> DistanceMatrix {
        let n = self.len();
        let mut data = Vec::with_capacity(n * n);
        for s in 0..n {
            data.extend(self.sssp(s));
        }
        DistanceMatrix { n, data }
    }

    /// Length scale used for comparison tolerances: twice the eccentricity of
    /// vertex 0, an upper bound for the diameter within a factor two.
    pub fn length_scale(&self) -> f64 {
        *self.scale.get_or_init(|| {
            let ecc = self.sssp(0).into_iter().fold(0.0, f64::max);
            2.0 * ecc
        })
    }

    /// Global comparison tolerance for length tests.
    pub fn tol(&self) -> f64 {
        TOL_GEOM_REL * self.length_scale().max(f64::MIN_POSITIVE)
    }

    /// Exact diameter (maximum over all pairs).
    pub fn diameter(&self) -> f64 {
        (0..self.len())
            .map(|s| self.sssp(s).into_iter().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Lexicographically smallest shortest path from `s` to `t` by vertex id
    /// sequence, given the distances to `t`.
    pub fn canonical_path_to(&self, s: usize, t: usize, dist_to_t: &[f64]) -> Vec<usize> {
        let tol = self.tol();
        let mut path = vec![s];
        let mut v = s;
        while v != t {
            let next = self.adj[v].iter().find(|&&(w, e)| {
                dist_to_t[w] < dist_to_t[v]
                    && (self.edges[e].len + dist_to_t[w] - dist_to_t[v]).abs() <= tol
            });
            match next {
                Some(&(w, _)) => {
                    path.push(w);
                    v = w;
                }
                None => break,
            }
        }
        path
    }

    /// Canonical geodesic between `a` and `b`: the lexicographically smallest
    /// shortest path from the smaller id to the larger one.
    pub fn canonical_geodesic(&self, a: usize, b: usize) -> Vec<usize> {
        let (s, t) = if a <= b { (a, b) } else { (b, a) };
        let dt = self.sssp(t);
        self.canonical_path_to(s, t, &dt)
    }

    /// Open ball `{v : d(x, v) < r}` given a distance row from `x`.
    pub fn ball_from_row(row: &[f64], r: f64) -> Vec<usize> {
        row.iter()
            .enumerate()
            .filter(|(_, &d)| d < r)
            .map(|(v, _)| v)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.data[a * self.n..(a + 1) * self.n]
    }
}
