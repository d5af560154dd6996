use rand::Rng;
use serde::Serialize;

use super::UniformizedSpace;
use crate::error::{input, Result};
use crate::hyperbolize::UniformDomain;
use crate::measure::{doubling_constant_centers, DoublingReport, MeasureField};
use crate::metric::Curve;
use crate::report::{Status, VerificationReport};
use crate::sampling;

/// `a = min(1/8, 1/(6A))` for an `A`-uniform space.
pub fn corkscrew_a(uniformity: f64) -> f64 {
    (1.0 / 8.0f64).min(1.0 / (6.0 * uniformity))
}

/// Default corkscrew ratio `a₀ = 0.8·a`, strictly below `a`.
pub fn default_a0(uniformity: f64) -> f64 {
    0.8 * corkscrew_a(uniformity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CorkscrewBranch {
    /// Point on the geodesic towards the base point.
    Geodesic,
    /// The base point itself (short geodesic).
    Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorkscrewCertificate {
    pub z: usize,
    pub branch: CorkscrewBranch,
    /// `B(z, a₀r) ⊆ B(x, r)` verified as vertex sets.
    pub ball_inclusion: bool,
    pub boundary_distance: f64,
    /// `2a₀r`, the required boundary distance.
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Corkscrew {
    pub x: usize,
    pub r: f64,
    pub a0: f64,
    pub certificate: Option<CorkscrewCertificate>,
    pub candidates_tried: usize,
}

/// Walks the canonical geodesic from `x` to `base`: prefers the vertex nearest
/// arclength `r/3`, or `base` itself when the geodesic is shorter than
/// `2r/3`, and returns the first candidate satisfying `B(z, a₀r) ⊆ B(x, r)`
/// and `d_Ω(z) ≥ 2a₀r`.
pub fn corkscrew_point(dom: &UniformDomain, base: usize, x: usize, r: f64, a0: f64) -> Result<Corkscrew> {
    let g = dom.graph();
    g.check_vertex(x)?;
    g.check_vertex(base)?;
    if !(r > 0.0) || !(a0 > 0.0 && a0 < 1.0) {
        return Err(input("need r > 0 and 0 < a0 < 1"));
    }
    let to_base = g.sssp(base);
    let path = Curve::from_vertices(g, g.canonical_path_to(x, base, &to_base))?;
    let mut candidates: Vec<(usize, CorkscrewBranch, f64)> = path
        .vertices()
        .iter()
        .zip(path.arclength())
        .filter(|(_, &s)| s <= r)
        .map(|(&v, &s)| (v, CorkscrewBranch::Geodesic, (s - r / 3.0).abs()))
        .collect();
    candidates.sort_by(|a, b| a.2.total_cmp(&b.2));
    let base_entry = (base, CorkscrewBranch::Base, 0.0);
    if path.length() < 2.0 * r / 3.0 {
        candidates.insert(0, base_entry);
    } else {
        candidates.push(base_entry);
    }
    let from_x = g.sssp(x);
    let required = 2.0 * a0 * r;
    let mut tried = 0;
    for (z, branch, _) in candidates {
        tried += 1;
        let bd = dom.d_omega()[z];
        if bd < required {
            continue;
        }
        let from_z = g.sssp(z);
        let inclusion = (0..g.len()).all(|v| from_z[v] >= a0 * r || from_x[v] < r);
        if inclusion {
            return Ok(Corkscrew {
                x,
                r,
                a0,
                certificate: Some(CorkscrewCertificate {
                    z,
                    branch,
                    ball_inclusion: true,
                    boundary_distance: bd,
                    required,
                }),
                candidates_tried: tried,
            });
        }
    }
    Ok(Corkscrew {
        x,
        r,
        a0,
        certificate: None,
        candidates_tried: tried,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GlobalDoublingOptions {
    pub uniformity: f64,
    pub corkscrew_samples: usize,
    pub seed: u64,
}

impl Default for GlobalDoublingOptions {
    fn default() -> Self {
        Self {
            uniformity: 1.0,
            corkscrew_samples: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlobalDoublingOutcome {
    pub doubling: DoublingReport,
    pub beta: f64,
    /// `17 log C_d / (3R₀)` from the supplied small-scale constants.
    pub beta0: f64,
    pub corkscrews: Vec<Corkscrew>,
    /// Largest `μ_β(B_ε(x,r)) / μ_β(B_ε(z, a₀r))` over certified corkscrews.
    pub comparability: f64,
    pub truncation_biased: bool,
}

impl GlobalDoublingOutcome {
    pub fn report(&self) -> VerificationReport {
        let missing = self.corkscrews.iter().filter(|c| c.certificate.is_none()).count();
        let pass = self.doubling.cd.is_finite() && missing == 0 && self.comparability.is_finite();
        let status = if self.truncation_biased || self.beta <= self.beta0 {
            Status::Inconclusive
        } else {
            Status::from_pass(pass)
        };
        let mut r = VerificationReport::new("global-doubling", "uniformized-measure/globally-doubling", status)
            .measure("globalCd", self.doubling.cd)
            .measure("comparability", self.comparability)
            .measure("corkscrewFailures", missing as f64)
            .measure("beta", self.beta)
            .predict("beta0", self.beta0)
            .note("doubling over all scales up to twice the diameter, centered at every vertex of the uniformized space");
        if self.beta <= self.beta0 {
            r = r.note("beta does not exceed the threshold from the small-scale constants");
        }
        r.sections.push(self.doubling.report("uniformized-measure/globally-doubling"));
        r
    }
}

/// Doubling of `μ_β` on the closure of the uniformized space at every scale,
/// plus corkscrew comparability on sampled balls with log-uniform radii
/// between three incident edge lengths and twice the largest distance.
pub fn global_doubling_check(
    us: &UniformizedSpace,
    mu_beta: &MeasureField,
    beta: f64,
    r0_used: f64,
    cd_used: f64,
    opts: GlobalDoublingOptions,
) -> Result<GlobalDoublingOutcome> {
    let closure = us.closure()?;
    let mu = closure.extend(mu_beta)?;
    let g = closure.domain.graph();
    // ideal vertices carry no lumped mass, so balls centered there inside the
    // tail edge are empty; they count as points of balls but not as centers
    let centers: Vec<usize> = (0..us.graph.len()).collect();
    let mut doubling = doubling_constant_centers(g, &mu, f64::INFINITY, &centers)?;
    doubling.exhaustive = true;
    let top = 2.0 * doubling.max_distance;
    let a0 = default_a0(opts.uniformity);
    let mut rng = sampling::rng(opts.seed);
    let mut corkscrews = Vec::with_capacity(opts.corkscrew_samples);
    let mut comparability: f64 = 1.0;
    for _ in 0..opts.corkscrew_samples {
        let x = rng.gen_range(0..g.len());
        // below a few mesh edges at x no vertex can play the corkscrew role
        let floor = (3.0 * g.neighbors(x).iter().map(|&(_, e)| g.edge(e).len).fold(0.0, f64::max)).max(top * 1e-3);
        let r = if floor >= top { top } else { floor * (rng.gen::<f64>() * (top / floor).ln()).exp() };
        let c = corkscrew_point(&closure.domain, us.base(), x, r, a0)?;
        if let Some(cert) = &c.certificate {
            let outer = mu.mass_of(&crate::metric::MetricGraph::ball_from_row(&g.sssp(x), r));
            let inner = mu.mass_of(&crate::metric::MetricGraph::ball_from_row(&g.sssp(cert.z), a0 * r));
            comparability = comparability.max(if inner > 0.0 { outer / inner } else { f64::INFINITY });
        }
        corkscrews.push(c);
    }
    Ok(GlobalDoublingOutcome {
        doubling,
        beta,
        beta0: 17.0 * cd_used.ln() / (3.0 * r0_used),
        corkscrews,
        comparability,
        truncation_biased: us.truncation_biased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_kary_tree;
    use crate::uniformize::{mu_beta, uniformize};

    #[test]
    fn base_point_is_its_own_corkscrew() {
        let ms = gen_kary_tree(2, 4, 1.0).unwrap();
        let us = uniformize(&ms.space, 1.0).unwrap();
        let cl = us.closure().unwrap();
        let a0 = default_a0(1.0);
        let r = 0.1;
        let c = corkscrew_point(&cl.domain, 0, 0, r, a0).unwrap();
        let cert = c.certificate.unwrap();
        assert_eq!(cert.z, 0);
        assert_eq!(cert.branch, CorkscrewBranch::Base);
        assert!(cert.boundary_distance >= 2.0 * a0 * r);
    }

    #[test]
    fn global_doubling_finite_on_small_tree() {
        let ms = gen_kary_tree(2, 5, 1.0).unwrap();
        let us = uniformize(&ms.space, 1.0).unwrap();
        let beta = 5.0 * 2f64.ln();
        let mb = mu_beta(&ms.space, &ms.measure, beta).unwrap();
        let o = global_doubling_check(&us, &mb, beta, 3.0, 4.0, GlobalDoublingOptions::default()).unwrap();
        assert!(o.doubling.cd.is_finite());
        assert!(o.corkscrews.iter().all(|c| c.certificate.is_some()));
    }
}
