//! Discrete potential theory: minimal upper gradients, `p`-energy,
//! `p`-harmonic Dirichlet problems, capacities, the energy transfer under
//! uniformization and finite-energy Liouville criteria.

mod capacity;
mod liouville;
mod oscillation;
mod solver;
mod transfer;

use serde::Serialize;

use crate::error::{input, Result};
use crate::measure::MeasureField;
use crate::metric::MetricGraph;

pub use capacity::{capacity_support, sobolev_capacity, variational_capacity, CapacityKind, CapacityResult, SupportReport};
pub use liouville::{
    liouville_criterion, liouville_experiment, CriterionKind, EndVerdict, LiouvilleCriterion, LiouvilleExperiment,
    LiouvilleThresholds, Verdict,
};
pub use oscillation::{oscillation_bound_check, OscillationOutcome, OscillationRow};
pub use solver::{solve_p_harmonic, solve_with_edge_masses, SolveOptions, SolveResult};
pub use transfer::{annulus_dirichlet, transfer_check_pharmonic, TransferOutcome};

/// Real value per vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FunctionField(Vec<f64>);

impl FunctionField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(input(format!("function value at vertex {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn value(&self, v: usize) -> f64 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Mass per edge, `m_e = ℓ_e (ν(u)/S(u) + ν(v)/S(v))` with `S` the total
/// incident length, so that `Σ_e m_e = Σ_v ν(v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EdgeMassField(Vec<f64>);

impl EdgeMassField {
    pub fn from_vertex_masses(g: &MetricGraph, mu: &MeasureField) -> Result<Self> {
        mu.check_len(g.len())?;
        let share: Vec<f64> = (0..g.len())
            .map(|v| {
                let s = g.incident_length(v);
                if s > 0.0 {
                    mu.mass(v) / s
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self(g.edges().iter().map(|e| e.len * (share[e.u] + share[e.v])).collect()))
    }

    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if let Some(i) = masses.iter().position(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(input(format!("edge mass {i} must be finite and non-negative")));
        }
        Ok(Self(masses))
    }

    /// Masses carried to a graph with the same edges and new lengths so that
    /// `m'_e/ℓ'_e^p = m_e/ℓ_e^p`: the `p`-energy of every function is kept.
    pub fn transported(&self, from: &MetricGraph, to: &MetricGraph, p: f64) -> Result<Self> {
        if from.edges().len() != self.0.len() || to.edges().len() != self.0.len() {
            return Err(input("edge mass field and graphs disagree on the edge count"));
        }
        Self::from_masses(
            from.edges()
                .iter()
                .zip(to.edges())
                .zip(&self.0)
                .map(|((a, b), m)| m * (b.len / a.len).powf(p))
                .collect(),
        )
    }

    pub fn masses(&self) -> &[f64] {
        &self.0
    }

    pub fn mass(&self, e: usize) -> f64 {
        self.0[e]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `g_e = |u(a) − u(b)| / ℓ_e`, the smallest edge-constant upper gradient.
pub fn min_upper_gradient(g: &MetricGraph, u: &[f64]) -> Result<Vec<f64>> {
    check_function(g, u)?;
    Ok(g.edges().iter().map(|e| (u[e.u] - u[e.v]).abs() / e.len).collect())
}

/// `Σ_e m_e g_e^p`.
pub fn p_energy(g: &MetricGraph, m: &EdgeMassField, u: &[f64], p: f64) -> Result<f64> {
    check_p(p, 1.0)?;
    check_masses(g, m)?;
    Ok(min_upper_gradient(g, u)?.iter().zip(m.masses()).map(|(ge, me)| me * ge.powf(p)).sum())
}

/// Gradient of [`p_energy`] with respect to the vertex values (`p > 1`).
pub fn p_energy_gradient(g: &MetricGraph, m: &EdgeMassField, u: &[f64], p: f64) -> Result<Vec<f64>> {
    check_p(p, 1.0)?;
    if p == 1.0 {
        return Err(input("the 1-energy is not differentiable"));
    }
    check_masses(g, m)?;
    check_function(g, u)?;
    let mut grad = vec![0.0; g.len()];
    for (e, me) in g.edges().iter().zip(m.masses()) {
        let c = me / e.len.powf(p);
        let delta = u[e.u] - u[e.v];
        let flux = p * c * delta.abs().powf(p - 1.0) * delta.signum();
        grad[e.u] += flux;
        grad[e.v] -= flux;
    }
    Ok(grad)
}

pub(crate) fn check_p(p: f64, min: f64) -> Result<()> {
    if p.is_finite() && p >= min {
        Ok(())
    } else {
        Err(input(format!("p must be at least {min}, got {p}")))
    }
}

fn check_masses(g: &MetricGraph, m: &EdgeMassField) -> Result<()> {
    if m.masses().len() == g.edges().len() {
        Ok(())
    } else {
        Err(input(format!("edge mass field has {} entries for {} edges", m.masses().len(), g.edges().len())))
    }
}

fn check_function(g: &MetricGraph, u: &[f64]) -> Result<()> {
    if u.len() != g.len() {
        return Err(input(format!("function has {} values for {} vertices", u.len(), g.len())));
    }
    if let Some(i) = u.iter().position(|v| !v.is_finite()) {
        return Err(input(format!("function value at vertex {i} is not finite")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Edge;

    fn path(n: usize) -> MetricGraph {
        MetricGraph::new(n, (0..n - 1).map(|i| Edge { u: i, v: i + 1, len: 1.0 }).collect()).unwrap()
    }

    #[test]
    fn unit_edge_energy() {
        let g = path(2);
        let m = EdgeMassField::from_vertex_masses(&g, &MeasureField::uniform(2, 1.0).unwrap()).unwrap();
        assert_eq!(m.masses(), &[2.0]);
        assert_eq!(p_energy(&g, &m, &[0.0, 1.0], 2.0).unwrap(), 2.0);
        assert_eq!(p_energy(&g, &m, &[3.0, 3.0], 2.0).unwrap(), 0.0);
    }

    #[test]
    fn mass_is_conserved() {
        let g = path(7);
        let mu = MeasureField::new(vec![0.3, 1.0, 2.0, 0.0, 5.0, 0.1, 0.7]).unwrap();
        let m = EdgeMassField::from_vertex_masses(&g, &mu).unwrap();
        assert!((m.total() - mu.total()).abs() < 1e-14);
    }

    #[test]
    fn gradient_of_identity_is_one() {
        let g = path(5);
        let u: Vec<f64> = (0..5).map(|i| i as f64).collect();
        assert!(min_upper_gradient(&g, &u).unwrap().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn transport_preserves_energy() {
        let g = path(4);
        let h = MetricGraph::new(4, vec![
            Edge { u: 0, v: 1, len: 0.5 },
            Edge { u: 1, v: 2, len: 0.25 },
            Edge { u: 2, v: 3, len: 2.0 },
        ])
        .unwrap();
        let m = EdgeMassField::from_vertex_masses(&g, &MeasureField::uniform(4, 1.0).unwrap()).unwrap();
        let mt = m.transported(&g, &h, 3.0).unwrap();
        let u = [0.0, 0.4, -1.0, 2.0];
        let a = p_energy(&g, &m, &u, 3.0).unwrap();
        let b = p_energy(&h, &mt, &u, 3.0).unwrap();
        assert!((a - b).abs() <= 1e-14 * a);
    }
}
