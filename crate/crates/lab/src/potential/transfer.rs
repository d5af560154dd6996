use serde::Serialize;

use super::{min_upper_gradient, p_energy, solve_with_edge_masses, EdgeMassField, SolveOptions};
use crate::error::{input, Result};
use crate::measure::MeasureField;
use crate::metric::PointedSpace;
use crate::report::{Status, VerificationReport};
use crate::uniformize::{mu_beta, uniformize};

/// Dirichlet data `a` on `d(·, z₀) ≤ r1` and `b` on `d(·, z₀) ≥ r2`; the free
/// region is the annulus in between.
pub fn annulus_dirichlet(ps: &PointedSpace, r1: f64, r2: f64, a: f64, b: f64) -> Result<Vec<(usize, f64)>> {
    if !(0.0 <= r1 && r1 < r2) {
        return Err(input("need 0 ≤ r1 < r2"));
    }
    Ok(ps
        .base_distances()
        .iter()
        .enumerate()
        .filter_map(|(v, &d)| {
            if d <= r1 {
                Some((v, a))
            } else if d >= r2 {
                Some((v, b))
            } else {
                None
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferOutcome {
    pub p: f64,
    pub eps: f64,
    pub beta: f64,
    pub energy: f64,
    pub energy_eps: f64,
    pub energy_rel_gap: f64,
    pub sup_diff: f64,
    pub tol: f64,
    /// Largest `|g_{u,ε} ℓ_ε − g_u ℓ|` relative to `|Δu|`.
    pub gradient_identity_err: f64,
    /// Edges whose ratio `ℓ/ℓ_ε` leaves `[e^{ε min d}, e^{ε max d}]`.
    pub band_violations: usize,
    /// Relative energy gap when `μ_β` edge masses use the length-share rule
    /// instead of being transported.
    pub length_share_rel_gap: f64,
    pub converged: bool,
}

impl TransferOutcome {
    pub fn pass(&self) -> bool {
        self.converged
            && self.energy_rel_gap <= 1e-6
            && self.sup_diff <= 10.0 * self.tol
            && self.gradient_identity_err <= 1e-12
            && self.band_violations == 0
    }

    pub fn report(&self) -> VerificationReport {
        VerificationReport::new("transfer-pharmonic", "energy-transfer/uniformized-measure", Status::from_pass(self.pass()))
            .measure("energy", self.energy)
            .measure("energyEps", self.energy_eps)
            .measure("energyRelGap", self.energy_rel_gap)
            .measure("supDiff", self.sup_diff)
            .measure("gradientIdentityErr", self.gradient_identity_err)
            .measure("bandViolations", self.band_violations as f64)
            .measure("lengthShareRelGap", self.length_share_rel_gap)
            .predict("energyRelTol", 1e-6)
            .predict("supTol", 10.0 * self.tol)
            .predict("beta", self.beta)
            .note("μ_β edge masses are the (d, μ) edge masses transported by (ℓ_ε/ℓ)^p, which makes the energy identity exact per edge")
    }
}

/// Solves the same Dirichlet problem in `(d, μ)` and in `(d_ε, μ_β)` with
/// `β = pε` and compares solutions, energies and edge gradients.
pub fn transfer_check_pharmonic(
    ps: &PointedSpace,
    mu: &MeasureField,
    eps: f64,
    p: f64,
    dirichlet: &[(usize, f64)],
    tol: f64,
) -> Result<TransferOutcome> {
    let us = uniformize(ps, eps)?;
    let g = &ps.graph;
    let ge = &us.graph;
    let m = EdgeMassField::from_vertex_masses(g, mu)?;
    let me = m.transported(g, ge, p)?;
    let opts = SolveOptions::new(p, tol);
    let a = solve_with_edge_masses(g, &m, dirichlet, &opts)?;
    let b = solve_with_edge_masses(ge, &me, dirichlet, &opts)?;
    let sup_diff = a
        .u
        .values()
        .iter()
        .zip(b.u.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let energy = p_energy(g, &m, a.u.values(), p)?;
    let energy_eps = p_energy(ge, &me, b.u.values(), p)?;
    let scale = energy.abs().max(energy_eps.abs());
    let energy_rel_gap = if scale > 0.0 { (energy - energy_eps).abs() / scale } else { 0.0 };

    let u = a.u.values();
    let gu = min_upper_gradient(g, u)?;
    let gue = min_upper_gradient(ge, u)?;
    let dz = &us.base_dist;
    let mut identity: f64 = 0.0;
    let mut band = 0;
    for (k, (e, ee)) in g.edges().iter().zip(ge.edges()).enumerate() {
        let jump = (u[e.u] - u[e.v]).abs();
        if jump > 0.0 {
            identity = identity.max((gue[k] * ee.len - gu[k] * e.len).abs() / jump);
        }
        let ratio = e.len / ee.len;
        let lo = (eps * dz[e.u].min(dz[e.v])).exp();
        let hi = (eps * dz[e.u].max(dz[e.v])).exp();
        if ratio < lo * (1.0 - 1e-12) || ratio > hi * (1.0 + 1e-12) {
            band += 1;
        }
    }

    let beta = p * eps;
    let share = EdgeMassField::from_vertex_masses(ge, &mu_beta(ps, mu, beta)?)?;
    let c = solve_with_edge_masses(ge, &share, dirichlet, &opts)?;
    let length_share_rel_gap = if energy > 0.0 { (c.energy - energy).abs() / energy } else { 0.0 };

    Ok(TransferOutcome {
        p,
        eps,
        beta,
        energy,
        energy_eps,
        energy_rel_gap,
        sup_diff,
        tol,
        gradient_identity_err: identity,
        band_violations: band,
        length_share_rel_gap,
        converged: a.converged && b.converged,
    })
}
