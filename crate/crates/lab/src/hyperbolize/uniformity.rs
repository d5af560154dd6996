use serde::Serialize;

use super::UniformDomain;
use crate::conformal::{edge_integral, PowerDensity};
use crate::error::{input, Result};
use crate::metric::{Curve, Edge, MetricGraph};
use crate::report::{Status, VerificationReport};
use crate::sampling;

/// Smallest `A` for which a curve is `A`-uniform, evaluated at its vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UniformCurveCheck {
    pub minimal_a: f64,
    /// `l(γ)/d(x,y)`.
    pub length_ratio: f64,
    /// Largest `min(t, l−t)/d_Ω(γ(t))`.
    pub cigar_ratio: f64,
    pub worst_vertex: Option<usize>,
    pub pass: bool,
}

/// Checks `l(γ) ≤ A d(x,y)` and `d_Ω(γ(t)) ≥ min(t, l−t)/A` at every vertex.
/// A constant curve is `1`-uniform.
pub fn uniform_curve_check(dom: &UniformDomain, curve: &Curve, a: f64) -> UniformCurveCheck {
    let (x, y) = (curve.start(), curve.end());
    let l = curve.length();
    let d_xy = if x == y { 0.0 } else { dom.graph().sssp(x)[y] };
    let length_ratio = if l == 0.0 {
        1.0
    } else if d_xy > 0.0 {
        l / d_xy
    } else {
        f64::INFINITY
    };
    let d = dom.d_omega();
    let mut cigar_ratio: f64 = 0.0;
    let mut worst_vertex = None;
    for (&v, &t) in curve.vertices().iter().zip(curve.arclength()) {
        let depth = t.min(l - t).max(0.0);
        if depth == 0.0 {
            continue;
        }
        let ratio = if d[v] > 0.0 { depth / d[v] } else { f64::INFINITY };
        if ratio > cigar_ratio {
            cigar_ratio = ratio;
            worst_vertex = Some(v);
        }
    }
    let minimal_a = length_ratio.max(cigar_ratio).max(1.0);
    UniformCurveCheck {
        minimal_a,
        length_ratio,
        cigar_ratio,
        worst_vertex,
        pass: minimal_a <= a * (1.0 + 1e-12),
    }
}

const THETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Source graph reweighted by `d_Ω^{−θ}` on interior edges (boundary edges
/// keep infinite weight and are dropped for `θ > 0`).
fn weighted_graph(dom: &UniformDomain, theta: f64) -> Option<MetricGraph> {
    let g = dom.graph();
    if theta == 0.0 {
        return Some(g.clone());
    }
    let d = dom.d_omega();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| !dom.is_boundary(e.u) && !dom.is_boundary(e.v))
        .map(|e| Edge {
            len: edge_integral(&PowerDensity { theta }, d[e.u], d[e.v], e.len),
            ..*e
        })
        .collect();
    MetricGraph::new_unchecked_connectivity(g.len(), edges).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UniformityEstimate {
    /// Largest per-pair minimal constant.
    pub a: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pairs_checked: usize,
    /// Per pair, the exponent `θ` of the winning density.
    pub winning_theta: Vec<f64>,
}

impl UniformityEstimate {
    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("uniformity", "uniform-domain/uniform-curves", Status::from_pass(self.a.is_finite()))
            .measure("A", self.a)
            .measure("pairsChecked", self.pairs_checked as f64)
            .note("curves are canonical geodesics for the densities d_Ω^{-θ}, θ ∈ {0, 1/4, 1/2, 3/4, 1}; the cigar condition is checked afterwards");
        if let Some((x, y)) = self.worst_pair {
            r = r.witness("worstPair", vec![x, y], vec![self.a]);
        }
        r
    }
}

/// Candidate uniform curves: canonical geodesics for the densities
/// `d_Ω^{−θ}`, with the weighted graphs built once.
pub struct UniformCurveFinder<'a> {
    dom: &'a UniformDomain,
    graphs: Vec<(f64, MetricGraph)>,
}

impl<'a> UniformCurveFinder<'a> {
    pub fn new(dom: &'a UniformDomain) -> Self {
        let graphs = THETAS
            .iter()
            .filter_map(|&t| weighted_graph(dom, t).map(|g| (t, g)))
            .collect();
        Self { dom, graphs }
    }

    /// Best candidate from `x` to `y`, its check and the winning `θ`.
    pub fn find(&self, x: usize, y: usize) -> Result<(Curve, UniformCurveCheck, f64)> {
        let mut best: Option<(Curve, UniformCurveCheck, f64)> = None;
        for (theta, wg) in &self.graphs {
            let to_y = wg.sssp(y);
            if !to_y[x].is_finite() {
                continue;
            }
            let curve = Curve::from_vertices(self.dom.graph(), wg.canonical_path_to(x, y, &to_y))?;
            let check = uniform_curve_check(self.dom, &curve, f64::INFINITY);
            if best.as_ref().is_none_or(|b| check.minimal_a < b.1.minimal_a) {
                best = Some((curve, check, *theta));
            }
        }
        best.ok_or_else(|| input(format!("no curve joins {x} and {y}")))
    }
}

/// Measures the uniformity constant over sampled interior pairs: for each
/// pair the best of the canonical geodesics for the densities `d_Ω^{−θ}`.
pub fn measure_uniformity(dom: &UniformDomain, pairs: usize, seed: u64) -> Result<UniformityEstimate> {
    let interior = dom.interior();
    if interior.len() < 2 {
        return Err(input("need at least two interior vertices"));
    }
    let finder = UniformCurveFinder::new(dom);
    let mut worst: f64 = 1.0;
    let mut worst_pair = None;
    let mut winning_theta = Vec::with_capacity(pairs);
    for (i, j) in sampling::distinct_pairs(interior.len(), pairs, seed) {
        let (x, y) = (interior[i], interior[j]);
        let (_, check, theta) = finder.find(x, y)?;
        winning_theta.push(theta);
        if check.minimal_a > worst || worst_pair.is_none() {
            worst = worst.max(check.minimal_a);
            worst_pair = Some((x, y));
        }
    }
    Ok(UniformityEstimate {
        a: worst,
        worst_pair,
        pairs_checked: winning_theta.len(),
        winning_theta,
    })
}

/// Declared constant when present, otherwise the measured one.
pub fn uniformity_constant(dom: &UniformDomain, pairs: usize, seed: u64) -> Result<f64> {
    match dom.uniformity() {
        Some(a) => Ok(a),
        None => Ok(measure_uniformity(dom, pairs, seed)?.a),
    }
}

/// Largest ratio of interior path distance to ambient distance over sampled
/// interior pairs.
pub fn quasiconvexity_constant(dom: &UniformDomain, samples: usize, seed: u64) -> Result<f64> {
    let interior = dom.interior();
    let g = dom.graph();
    let mut l: f64 = 1.0;
    for i in sampling::distinct_indices(interior.len(), samples, seed) {
        let x = interior[i];
        let d = g.sssp(x);
        let inner = g.sssp_within(x, |v| !dom.is_boundary(v));
        for &y in &interior {
            if y != x && d[y] > 0.0 {
                l = l.max(inner[y] / d[y]);
            }
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_interval, gen_square, vertex_at};

    #[test]
    fn constant_curve_is_one_uniform() {
        let md = gen_interval(0.125).unwrap();
        let c = Curve::from_vertices(md.domain.graph(), vec![8]).unwrap();
        let r = uniform_curve_check(&md.domain, &c, 1.0);
        assert!(r.pass);
        assert_eq!(r.minimal_a, 1.0);
    }

    #[test]
    fn mid_axis_curve_is_nearly_one_uniform() {
        let h = 1.0 / 32.0;
        let md = gen_square(h).unwrap();
        let g = md.domain.graph();
        let x = vertex_at(g, [-0.5, 0.0]).unwrap();
        let y = vertex_at(g, [0.5, 0.0]).unwrap();
        let c = Curve::from_vertices(g, g.canonical_geodesic(x, y)).unwrap();
        let r = uniform_curve_check(&md.domain, &c, 1.3);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn boundary_hugging_curve_has_large_constant() {
        let h = 1.0 / 8.0;
        let md = gen_square(h).unwrap();
        let g = md.domain.graph();
        let pts: Vec<usize> = (0..=16).map(|i| vertex_at(g, [-1.0 + h * i as f64, -1.0 + h]).unwrap()).collect();
        let c = Curve::from_vertices(g, pts).unwrap();
        let r = uniform_curve_check(&md.domain, &c, 1.0);
        assert!(!r.pass);
        assert!(r.minimal_a >= 7.0, "{r:?}");
    }

    #[test]
    fn square_measured_uniformity_is_moderate() {
        let md = gen_square(0.125).unwrap();
        let est = measure_uniformity(&md.domain, 20, 3).unwrap();
        assert!(est.a >= 1.0 && est.a < 10.0, "{est:?}");
        assert!((quasiconvexity_constant(&md.domain, 5, 1).unwrap() - 1.0).abs() < 1e-12);
    }
}
