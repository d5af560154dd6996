use serde::Serialize;

use super::quasihyperbolic;
use crate::error::Result;
use crate::metric::PointedSpace;
use crate::report::{Status, VerificationReport};
use crate::sampling;
use crate::uniformize::uniformize;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RoundTrip {
    pub eps: f64,
    /// Smallest and largest `k(x,y) / (ε d(x,y))` over sampled pairs.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub min_pair: Option<(usize, usize)>,
    pub max_pair: Option<(usize, usize)>,
    pub pairs: usize,
    pub truncation_biased: bool,
}

impl RoundTrip {
    pub fn band(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }

    pub fn report(&self) -> VerificationReport {
        let finite = self.min_ratio > 0.0 && self.max_ratio.is_finite();
        let status = if self.truncation_biased { Status::Inconclusive } else { Status::from_pass(finite) };
        let mut r = VerificationReport::new("roundtrip", "uniformize-then-hyperbolize/bilipschitz", status)
            .measure("minRatio", self.min_ratio)
            .measure("maxRatio", self.max_ratio)
            .measure("band", self.band())
            .measure("pairs", self.pairs as f64)
            .predict("eps", self.eps)
            .note("ratio is k(x,y)/(ε d(x,y)); stability under refinement is judged across runs");
        if let Some((x, y)) = self.min_pair {
            r = r.witness("minPair", vec![x, y], vec![self.min_ratio]);
        }
        if let Some((x, y)) = self.max_pair {
            r = r.witness("maxPair", vec![x, y], vec![self.max_ratio]);
        }
        r
    }
}

/// Uniformizes, closes the frontier with its ideal tails, and compares the
/// quasihyperbolic metric of the result with `ε d` on sampled vertex pairs.
pub fn roundtrip_bilipschitz(ps: &PointedSpace, eps: f64, pairs: usize, seed: u64) -> Result<RoundTrip> {
    let us = uniformize(ps, eps)?;
    let closure = us.closure()?;
    let qh = quasihyperbolic(&closure.domain)?;
    let n = ps.graph.len();
    let candidates: Vec<usize> = (0..n).filter(|&v| qh.from_source[v].is_some()).collect();
    let mut out = RoundTrip {
        eps,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        min_pair: None,
        max_pair: None,
        pairs: 0,
        truncation_biased: us.truncation_biased,
    };
    let sampled = sampling::distinct_pairs(candidates.len(), pairs, seed);
    let mut by_source: Vec<(usize, usize)> = sampled.iter().map(|&(i, j)| (candidates[i], candidates[j])).collect();
    by_source.sort_unstable();
    let mut cached: Option<(usize, Vec<f64>, Vec<f64>)> = None;
    for (x, y) in by_source {
        if cached.as_ref().is_none_or(|c| c.0 != x) {
            cached = Some((x, ps.graph.sssp(x), qh.k_row(x)?));
        }
        let (_, d, k) = cached.as_ref().expect("row cached above");
        let ratio = k[y] / (eps * d[y]);
        out.pairs += 1;
        if ratio < out.min_ratio {
            out.min_ratio = ratio;
            out.min_pair = Some((x, y));
        }
        if ratio > out.max_ratio {
            out.max_ratio = ratio;
            out.max_pair = Some((x, y));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_kary_tree, gen_line, Weight};

    #[test]
    fn line_round_trip_is_isometric_up_to_eps() {
        let ms = gen_line(4.0, 0.25, &Weight::Const(1.0)).unwrap();
        let rt = roundtrip_bilipschitz(&ms.space, 1.0, 40, 1).unwrap();
        assert!((rt.min_ratio - 1.0).abs() < 1e-9 && (rt.max_ratio - 1.0).abs() < 1e-9, "{rt:?}");
    }

    #[test]
    fn tree_band_is_finite() {
        let ms = gen_kary_tree(2, 5, 1.0).unwrap();
        let rt = roundtrip_bilipschitz(&ms.space, 1.0, 40, 1).unwrap();
        assert!(rt.min_ratio > 0.0 && rt.band() < 5.0, "{rt:?}");
    }
}
