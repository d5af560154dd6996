use serde::Serialize;

use crate::error::{input, Result};
use crate::hyperbolize::UniformDomain;
use crate::report::{Status, VerificationReport};
use crate::sampling;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnularPair {
    pub radius: f64,
    pub x: usize,
    pub y: usize,
    pub distance: f64,
    /// Length of the shortest path confined to the enlarged annulus; infinite
    /// when the confined region does not connect the pair.
    pub confined_length: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnularOutcome {
    pub lambda: f64,
    pub pairs: Vec<AnnularPair>,
    pub skipped_radii: Vec<f64>,
    pub worst_ratio: f64,
}

impl AnnularOutcome {
    pub fn all_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn report(&self) -> VerificationReport {
        let status = if self.pairs.is_empty() {
            Status::Inconclusive
        } else if self.all_pass() {
            Status::Pass
        } else {
            Status::Fail
        };
        let mut r = VerificationReport::new("annular-quasiconvexity", "annular-quasiconvexity/lambda-4A", status)
            .measure("pairs", self.pairs.len() as f64)
            .measure("failures", self.pairs.iter().filter(|p| !p.pass).count() as f64)
            .measure("worstRatio", self.worst_ratio)
            .predict("lambda", self.lambda);
        for p in self.pairs.iter().filter(|p| !p.pass).take(8) {
            r = r.witness("disconnectedOrLong", vec![p.x, p.y], vec![p.radius, p.distance, p.confined_length]);
        }
        for s in &self.skipped_radii {
            r = r.note(format!("annulus empty at radius {s}; skipped"));
        }
        r
    }
}

/// For every radius and sampled pair `x, y` with `r ≤ d(a,·) < 2r`, searches a
/// path inside `r/Λ ≤ d(a,·) < Λr` of length at most `Λ·d(x, y)`.
pub fn annular_quasiconvexity_check(
    dom: &UniformDomain,
    a: usize,
    lambda: f64,
    radii: &[f64],
    pairs_per_radius: usize,
    seed: u64,
) -> Result<AnnularOutcome> {
    let g = dom.graph();
    g.check_vertex(a)?;
    if !dom.is_boundary(a) {
        return Err(input(format!("vertex {a} is not a tagged boundary vertex")));
    }
    if !(lambda >= 2.0) {
        return Err(input("annular dilation must be at least 2"));
    }
    let from_a = g.sssp(a);
    let tol = g.tol();
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    for (k, &r) in radii.iter().enumerate() {
        if !(r > 0.0) {
            return Err(input("radii must be positive"));
        }
        let annulus: Vec<usize> = (0..g.len())
            .filter(|&v| from_a[v] >= r && from_a[v] < 2.0 * r)
            .collect();
        if annulus.is_empty() {
            skipped.push(r);
            continue;
        }
        let m = annulus.len();
        let chosen: Vec<(usize, usize)> = if m * m <= pairs_per_radius {
            annulus.iter().flat_map(|&x| annulus.iter().map(move |&y| (x, y))).collect()
        } else {
            sampling::distinct_pairs(m, pairs_per_radius, seed.wrapping_add(k as u64))
                .into_iter()
                .map(|(i, j)| (annulus[i], annulus[j]))
                .collect()
        };
        let inner = r / lambda;
        let outer = lambda * r;
        for (x, y) in chosen {
            if x == y {
                pairs.push(AnnularPair {
                    radius: r,
                    x,
                    y,
                    distance: 0.0,
                    confined_length: 0.0,
                    ratio: 0.0,
                    pass: true,
                });
                continue;
            }
            let distance = g.sssp(x)[y];
            let confined = g.sssp_within(x, |v| from_a[v] >= inner && from_a[v] < outer)[y];
            let ratio = confined / distance;
            pairs.push(AnnularPair {
                radius: r,
                x,
                y,
                distance,
                confined_length: confined,
                ratio,
                pass: confined <= lambda * distance + tol,
            });
        }
    }
    let worst_ratio = pairs.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(AnnularOutcome {
        lambda,
        pairs,
        skipped_radii: skipped,
        worst_ratio,
    })
}
