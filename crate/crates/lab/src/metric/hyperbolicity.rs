use rand::Rng;
use serde::Serialize;

use super::{require_nonempty, MetricGraph, PointedSpace};
use crate::error::Result;
use crate::sampling;

#[derive(Debug, Clone, Copy)]
pub struct DeltaOptions {
    /// Exhaustive enumeration is used when `|V|³` does not exceed this.
    pub exhaustive_budget: u64,
    /// Number of random triples in sampled mode.
    pub samples: usize,
    pub seed: u64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            exhaustive_budget: 1_000_000,
            samples: 256,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperbolicityReport {
    pub delta_estimate: f64,
    /// Rough-starlikeness constant, when ray tips were available.
    pub m: Option<f64>,
    pub triples_sampled: usize,
    pub worst_triangle: Option<[usize; 3]>,
    pub exhaustive: bool,
    /// Canonical geodesics only: the value bounds the all-geodesics δ from below.
    pub lower_bound: bool,
}

/// Thin-triangle constant against canonical geodesics.
pub fn delta_hyperbolicity(g: &MetricGraph, opts: DeltaOptions) -> Result<HyperbolicityReport> {
    let n = g.len();
    let cube = (n as u64).saturating_mul(n as u64).saturating_mul(n as u64);
    if cube <= opts.exhaustive_budget {
        Ok(exhaustive(g))
    } else {
        Ok(sampled(g, opts))
    }
}

fn excess(side: &[usize], others: &[&[usize]], dist: impl Fn(usize, usize) -> f64) -> f64 {
    side.iter()
        .map(|&w| {
            others
                .iter()
                .flat_map(|o| o.iter())
                .map(|&u| dist(w, u))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn exhaustive(g: &MetricGraph) -> HyperbolicityReport {
    let n = g.len();
    let dm = g.all_pairs();
    let mut paths: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for a in 0..n {
        paths[a] = (0..n)
            .map(|b| if a < b { g.canonical_path_to(a, b, dm.row(b)) } else { Vec::new() })
            .collect();
    }
    let d = |a: usize, b: usize| dm.get(a, b);
    let mut best = 0.0;
    let mut worst = None;
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                count += 1;
                let (ab, bc, ac) = (&paths[a][b], &paths[b][c], &paths[a][c]);
                let e = excess(ab, &[bc, ac], d)
                    .max(excess(bc, &[ab, ac], d))
                    .max(excess(ac, &[ab, bc], d));
                if e > best {
                    best = e;
                    worst = Some([a, b, c]);
                }
            }
        }
    }
    HyperbolicityReport {
        delta_estimate: best,
        m: None,
        triples_sampled: count,
        worst_triangle: worst,
        exhaustive: true,
        lower_bound: true,
    }
}

fn sampled(g: &MetricGraph, opts: DeltaOptions) -> HyperbolicityReport {
    let n = g.len();
    let mut rng = sampling::rng(opts.seed);
    let mut best = 0.0;
    let mut worst = None;
    for _ in 0..opts.samples {
        let mut t = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        t.sort_unstable();
        let [a, b, c] = t;
        let to_b = g.sssp(b);
        let to_c = g.sssp(c);
        let ab = g.canonical_path_to(a, b, &to_b);
        let bc = g.canonical_path_to(b, c, &to_c);
        let ac = g.canonical_path_to(a, c, &to_c);
        let side_excess = |side: &[usize], o1: &[usize], o2: &[usize]| {
            let sources: Vec<(usize, f64)> = o1.iter().chain(o2).map(|&v| (v, 0.0)).collect();
            let dist = g.multi_source(&sources);
            side.iter().map(|&w| dist[w]).fold(0.0, f64::max)
        };
        let e = side_excess(&ab, &bc, &ac)
            .max(side_excess(&bc, &ab, &ac))
            .max(side_excess(&ac, &ab, &bc));
        if e > best {
            best = e;
            worst = Some([a, b, c]);
        }
    }
    HyperbolicityReport {
        delta_estimate: best,
        m: None,
        triples_sampled: opts.samples,
        worst_triangle: worst,
        exhaustive: false,
        lower_bound: true,
    }
}

/// Largest distance from a vertex to the union of canonical geodesics from the
/// base point to the ray tips.
pub fn roughly_starlike_m(ps: &PointedSpace) -> Result<f64> {
    require_nonempty(&ps.ray_tips, "ray tip set")?;
    let g = &ps.graph;
    let mut on_rays = vec![false; g.len()];
    for &tip in &ps.ray_tips {
        let to_tip = g.sssp(tip);
        for v in g.canonical_path_to(ps.base, tip, &to_tip) {
            on_rays[v] = true;
        }
    }
    let sources: Vec<(usize, f64)> = (0..g.len()).filter(|&v| on_rays[v]).map(|v| (v, 0.0)).collect();
    Ok(g.multi_source(&sources).into_iter().fold(0.0, f64::max))
}
