use serde::Serialize;

use super::{quasiconvexity_constant, QuasihyperbolicSpace, UniformDomain};
use crate::error::{input, LabError, Result};
use crate::measure::{doubling_constant, doubling_constant_centers, DoublingMode, DoublingReport, MeasureField};
use crate::report::{Status, VerificationReport};

/// Interior masses divided by `d_Ω^α`, indexed like the quasihyperbolic graph.
fn reweight(dom: &UniformDomain, qh: &QuasihyperbolicSpace, mu: &MeasureField, alpha: f64) -> Result<MeasureField> {
    mu.check_len(dom.len())?;
    let d = dom.d_omega();
    let masses = qh
        .to_source
        .iter()
        .map(|&v| {
            if d[v] > 0.0 {
                Ok(mu.mass(v) / d[v].powf(alpha))
            } else {
                Err(LabError::Data(format!("interior vertex {v} has zero boundary distance")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    MeasureField::new(masses)
}

/// `μ^α = μ / d_Ω^α` on the interior vertices (quasihyperbolic indexing);
/// boundary masses are dropped.
pub fn mu_alpha(dom: &UniformDomain, qh: &QuasihyperbolicSpace, mu: &MeasureField, alpha: f64) -> Result<MeasureField> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(input("alpha must be positive"));
    }
    reweight(dom, qh, mu, alpha)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperbolizedDoublingOutcome {
    pub alpha: f64,
    pub r0: f64,
    /// `μ^α` on `k`-balls of radius at most `r0`.
    pub doubling: DoublingReport,
    /// Doubling constant of `μ` on the source, centers in the interior.
    pub c_mu: f64,
    pub quasiconvexity: f64,
    pub m: u32,
    /// `4^α C_μ^m`.
    pub bound: f64,
}

impl HyperbolizedDoublingOutcome {
    pub fn within_bound(&self) -> bool {
        self.doubling.cd <= self.bound * (1.0 + 1e-12)
    }

    pub fn report(&self) -> VerificationReport {
        let anchor = "hyperbolized-measure/doubling";
        let mut r = VerificationReport::new("hyperbolized-doubling", anchor, Status::from_pass(self.doubling.cd.is_finite() && self.within_bound()))
            .measure("Cd", self.doubling.cd)
            .measure("Cmu", self.c_mu)
            .measure("L", self.quasiconvexity)
            .predict("m", self.m as f64)
            .predict("bound", self.bound)
            .predict("alpha", self.alpha)
            .predict("R0", self.r0);
        r.sections.push(self.doubling.report(anchor));
        r
    }
}

/// Exhaustive doubling of `μ^α` on `k`-balls of radius at most `r0`, against
/// `4^α C_μ^m` with `m = ⌈log₂ 8L⌉` and `C_μ`, `L` measured on the source.
/// `alpha = 0` is accepted and compares `μ` itself on small `k`-balls.
pub fn hyperbolized_doubling_check(
    dom: &UniformDomain,
    qh: &QuasihyperbolicSpace,
    mu: &MeasureField,
    alpha: f64,
    r0: f64,
    seed: u64,
) -> Result<HyperbolizedDoublingOutcome> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(input("alpha must be non-negative"));
    }
    let weighted = reweight(dom, qh, mu, alpha)?;
    let doubling = doubling_constant(&qh.graph, &weighted, r0, DoublingMode::Exhaustive)?;
    let c_mu = doubling_constant_centers(dom.graph(), mu, f64::INFINITY, &dom.interior())?.cd;
    let l = quasiconvexity_constant(dom, 16, seed)?;
    let m = (8.0 * l).log2().ceil() as u32;
    Ok(HyperbolizedDoublingOutcome {
        alpha,
        r0,
        doubling,
        c_mu,
        quasiconvexity: l,
        m,
        bound: 4f64.powf(alpha) * c_mu.powi(m as i32),
    })
}
