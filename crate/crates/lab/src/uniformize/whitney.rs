use rand::Rng;
use serde::Serialize;

use super::UniformizedSpace;
use crate::error::Result;
use crate::report::{Status, VerificationReport};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WhitneySample {
    pub x: usize,
    pub r: f64,
    pub inner_ok: bool,
    pub outer_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WhitneyOutcome {
    pub c1: f64,
    pub c2: f64,
    pub samples: Vec<WhitneySample>,
    pub inclusion_failures: usize,
    pub pairs_checked: usize,
    pub two_point_failures: usize,
    /// Extremes of `d_ε(x,y) / (ρ_ε(x) d(x,y))` over the checked pairs.
    pub two_point_range: (f64, f64),
    pub truncation_biased: bool,
}

impl WhitneyOutcome {
    pub fn report(&self) -> VerificationReport {
        let pass = self.inclusion_failures == 0 && self.two_point_failures == 0;
        let status = if self.truncation_biased { Status::Inconclusive } else { Status::from_pass(pass) };
        let mut r = VerificationReport::new("whitney-inclusion", "subwhitney-balls/euclidean-sandwich", status)
            .measure("samples", self.samples.len() as f64)
            .measure("inclusionFailures", self.inclusion_failures as f64)
            .measure("pairsChecked", self.pairs_checked as f64)
            .measure("twoPointFailures", self.two_point_failures as f64)
            .measure("twoPointMinRatio", self.two_point_range.0)
            .measure("twoPointMaxRatio", self.two_point_range.1)
            .predict("C1", self.c1)
            .predict("C2", self.c2)
            .predict("twoPointLower", 1.0 / self.c2)
            .predict("twoPointUpper", (1.0 / std::f64::consts::E).exp());
        for s in self.samples.iter().filter(|s| !(s.inner_ok && s.outer_ok)).take(8) {
            r = r.witness("inclusionFailure", vec![s.x], vec![s.r]);
        }
        r
    }
}

/// Samples `x` and `r ≤ d_ε(x)/2` and verifies, as vertex sets,
/// `B(x, C₁r/ρ_ε(x)) ⊆ B_ε(x, r) ⊆ B(x, C₂r/ρ_ε(x))`, plus the two-point bound
/// `ρ_ε(x)d(x,y)/C₂ < d_ε(x,y) ≤ e^{1/e}ρ_ε(x)d(x,y)` whenever
/// `d_ε(x,y) < C₁d_ε(x)/(2C₂)`.
pub fn whitney_inclusion_check(us: &UniformizedSpace, m: f64, samples: usize, seed: u64) -> Result<WhitneyOutcome> {
    let consts = us.constants(m, 0.0, None);
    let (c1, c2) = (consts.c1, consts.c2);
    let bd = us.boundary_distances()?;
    let candidates: Vec<usize> = (0..us.graph.len()).filter(|&v| bd[v] > 0.0).collect();
    let mut rng = sampling::rng(seed);
    let tol_eps = us.graph.tol();
    let tol = us.source.graph.tol();
    let upper_factor = (1.0 / std::f64::consts::E).exp();
    let mut out = Vec::with_capacity(samples);
    let mut pairs = 0;
    let mut two_point_failures = 0;
    let mut range = (f64::INFINITY, 0.0f64);
    for _ in 0..samples {
        if candidates.is_empty() {
            break;
        }
        let x = candidates[rng.gen_range(0..candidates.len())];
        let r = (1.0 - rng.gen::<f64>()) * 0.5 * bd[x];
        let d = us.source.graph.sssp(x);
        let de = us.graph.sssp(x);
        let rho = us.rho(x);
        let (r_in, r_out) = (c1 * r / rho, c2 * r / rho);
        let mut inner_ok = true;
        let mut outer_ok = true;
        for v in 0..d.len() {
            if d[v] < r_in - tol && de[v] >= r + tol_eps {
                inner_ok = false;
            }
            if de[v] < r - tol_eps && d[v] >= r_out + tol {
                outer_ok = false;
            }
        }
        let near = c1 * bd[x] / (2.0 * c2);
        for v in 0..d.len() {
            if v == x || de[v] >= near {
                continue;
            }
            pairs += 1;
            let scaled = rho * d[v];
            let ratio = de[v] / scaled;
            range = (range.0.min(ratio), range.1.max(ratio));
            if !(de[v] > scaled / c2 - tol_eps && de[v] <= upper_factor * scaled + tol_eps) {
                two_point_failures += 1;
            }
        }
        out.push(WhitneySample { x, r, inner_ok, outer_ok });
    }
    Ok(WhitneyOutcome {
        c1,
        c2,
        inclusion_failures: out.iter().filter(|s| !(s.inner_ok && s.outer_ok)).count(),
        samples: out,
        pairs_checked: pairs,
        two_point_failures,
        two_point_range: range,
        truncation_biased: us.truncation_biased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_kary_tree;
    use crate::uniformize::uniformize;

    #[test]
    fn small_tree_passes() {
        let ms = gen_kary_tree(2, 5, 1.0).unwrap();
        let us = uniformize(&ms.space, 1.0).unwrap();
        let o = whitney_inclusion_check(&us, 0.0, 50, 1).unwrap();
        assert_eq!(o.samples.len(), 50);
        assert_eq!(o.inclusion_failures, 0);
        assert_eq!(o.report().status, Status::Pass);
    }
}
