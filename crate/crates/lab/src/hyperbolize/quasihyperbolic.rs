use rand::Rng;

use super::UniformDomain;
use crate::conformal::{edge_integral, partial_edge_integral, InverseDistance};
use crate::error::{input, Result};
use crate::metric::{Edge, MetricGraph};
use crate::report::{Status, VerificationReport};
use crate::sampling;

/// `(Ω, k)` on the interior vertices of a domain, reindexed densely.
#[derive(Debug, Clone)]
pub struct QuasihyperbolicSpace {
    pub graph: MetricGraph,
    /// Source vertex of each interior vertex.
    pub to_source: Vec<usize>,
    pub from_source: Vec<Option<usize>>,
    /// Source edges touching the boundary; their `k`-length is infinite.
    pub dropped_edges: Vec<usize>,
}

/// `k`-length of an edge whose endpoints have boundary distances `a`, `b`.
pub fn k_length(a: f64, b: f64, len: f64) -> f64 {
    edge_integral(&InverseDistance, a, b, len)
}

/// Exact `k`-lengths `∫ dt / d_Ω` on interior edges; edges touching the
/// boundary are dropped.
pub fn quasihyperbolic(dom: &UniformDomain) -> Result<QuasihyperbolicSpace> {
    let g = dom.graph();
    let d = dom.d_omega();
    let mut from_source = vec![None; g.len()];
    let mut to_source = Vec::new();
    for v in dom.interior() {
        from_source[v] = Some(to_source.len());
        to_source.push(v);
    }
    let mut edges = Vec::new();
    let mut dropped = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        match (from_source[e.u], from_source[e.v]) {
            (Some(a), Some(b)) => edges.push(Edge {
                u: a,
                v: b,
                len: k_length(d[e.u], d[e.v], e.len),
            }),
            _ => dropped.push(i),
        }
    }
    let graph = MetricGraph::new(to_source.len(), edges)
        .map_err(|e| input(format!("interior of the domain: {e}")))?;
    let pos: Vec<[f64; 2]> = to_source.iter().filter_map(|&v| g.position(v)).collect();
    let graph = if pos.len() == to_source.len() { graph.with_positions(pos)? } else { graph };
    Ok(QuasihyperbolicSpace {
        graph,
        to_source,
        from_source,
        dropped_edges: dropped,
    })
}

impl QuasihyperbolicSpace {
    /// `k(x, ·)` indexed by source vertex ids (infinite on the boundary).
    pub fn k_row(&self, x: usize) -> Result<Vec<f64>> {
        let i = self.interior_index(x)?;
        let row = self.graph.sssp(i);
        Ok(self
            .from_source
            .iter()
            .map(|slot| slot.map_or(f64::INFINITY, |j| row[j]))
            .collect())
    }

    pub fn k(&self, x: usize, y: usize) -> Result<f64> {
        Ok(self.k_row(x)?[y])
    }

    pub fn interior_index(&self, x: usize) -> Result<usize> {
        self.from_source
            .get(x)
            .copied()
            .flatten()
            .ok_or_else(|| input(format!("vertex {x} is not an interior vertex")))
    }

    /// `k` from the source of `k_row` to the point at parameter `t` along
    /// source edge `e` (measured from `e.u`).
    pub fn distance_to_point(dom: &UniformDomain, k_row: &[f64], e: &Edge, t: f64) -> f64 {
        let d = dom.d_omega();
        let via_u = k_row[e.u] + partial_edge_integral(&InverseDistance, d[e.u], d[e.v], e.len, t);
        let via_v = k_row[e.v] + partial_edge_integral(&InverseDistance, d[e.v], d[e.u], e.len, e.len - t);
        via_u.min(via_v)
    }
}

/// Checks, for sampled centers `x` and every interior `y`:
/// `k ≥ d/(2d_Ω(x))` when `d ≤ d_Ω(x)`, `k ≥ 1/2` when `d ≥ d_Ω(x)`,
/// `k ≤ 2Ld/d_Ω(x)` when `d ≤ d_Ω(x)/(2L)`, and the ball inclusions
/// `B(x, r d_Ω(x)/(2L)) ⊆ B_k(x, r) ⊆ B(x, 2r d_Ω(x))` for `r ∈ {1/8, 1/4, 1/2}`.
pub fn k_estimate_check(dom: &UniformDomain, qh: &QuasihyperbolicSpace, l: f64, samples: usize, seed: u64) -> Result<VerificationReport> {
    let g = dom.graph();
    let dom_d = dom.d_omega();
    let mut rng = sampling::rng(seed);
    let interior = dom.interior();
    let mut lower_fail = 0;
    let mut upper_fail = 0;
    let mut ball_fail = 0;
    let mut checked = 0;
    let slack = 1e-12;
    for _ in 0..samples {
        let x = interior[rng.gen_range(0..interior.len())];
        let d = g.sssp(x);
        let k = qh.k_row(x)?;
        let dx = dom_d[x];
        for &y in &interior {
            if y == x {
                continue;
            }
            checked += 1;
            let lower = if d[y] <= dx { d[y] / (2.0 * dx) } else { 0.5 };
            if k[y] < lower * (1.0 - slack) {
                lower_fail += 1;
            }
            if d[y] <= dx / (2.0 * l) && k[y] > 2.0 * l * d[y] / dx * (1.0 + slack) {
                upper_fail += 1;
            }
        }
        for r in [0.125, 0.25, 0.5] {
            let inner = r * dx / (2.0 * l);
            let outer = 2.0 * r * dx;
            for &y in &interior {
                let in_inner = d[y] < inner * (1.0 - slack);
                let in_k = k[y] < r;
                let in_outer = d[y] < outer * (1.0 + slack);
                if (in_inner && !in_k) || (in_k && !in_outer) {
                    ball_fail += 1;
                }
            }
        }
    }
    let pass = lower_fail == 0 && upper_fail == 0 && ball_fail == 0;
    Ok(VerificationReport::new("k-estimates", "quasihyperbolic-metric/local-comparison", Status::from_pass(pass))
        .measure("pairsChecked", checked as f64)
        .measure("lowerFailures", lower_fail as f64)
        .measure("upperFailures", upper_fail as f64)
        .measure("ballInclusionFailures", ball_fail as f64)
        .predict("L", l))
}
