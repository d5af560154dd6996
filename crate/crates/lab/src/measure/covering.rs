use serde::Serialize;

use crate::error::{input, Result};
use crate::metric::MetricGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoveringReport {
    pub count: usize,
    pub centers: Vec<usize>,
    /// `⌈R/r⌉`.
    pub n: u64,
    /// `C_d^{7(n+4)/6}` when a doubling constant was supplied.
    pub bound: Option<f64>,
}

/// Greedy farthest-point cover of `B(center, R)` by open balls of radius `r`
/// centered in it.
pub fn covering_number(g: &MetricGraph, center: usize, big_r: f64, r: f64, cd: Option<f64>) -> Result<CoveringReport> {
    g.check_vertex(center)?;
    if !(r > 0.0 && r <= big_r) {
        return Err(input("covering radii must satisfy 0 < r ≤ R"));
    }
    let from_center = g.sssp(center);
    let ball: Vec<usize> = MetricGraph::ball_from_row(&from_center, big_r);
    let mut nearest: Vec<f64> = ball.iter().map(|&v| from_center[v]).collect();
    let mut centers = vec![center];
    loop {
        let (far_i, far_d) = nearest
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
        if far_d < r {
            break;
        }
        let c = ball[far_i];
        centers.push(c);
        let row = g.sssp(c);
        for (slot, &v) in nearest.iter_mut().zip(&ball) {
            *slot = slot.min(row[v]);
        }
    }
    let n = (big_r / r).ceil() as u64;
    let bound = cd.map(|c| c.powf(7.0 * (n as f64 + 4.0) / 6.0));
    Ok(CoveringReport {
        count: centers.len(),
        centers,
        n,
        bound,
    })
}
