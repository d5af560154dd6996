use serde::Serialize;

use super::UniformizedSpace;
use crate::error::{input, LabError, Result};
use crate::measure::MeasureField;
use crate::metric::MetricGraph;
use crate::report::{Status, Table, VerificationReport};

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy)]
pub struct DimensionInputs {
    pub beta: f64,
    /// Doubling constant and scale from which the exponent window is derived.
    pub cd: f64,
    pub r0: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionOutcome {
    pub xi: usize,
    pub radii: Vec<f64>,
    pub masses: Vec<f64>,
    pub exponent: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    pub slack: f64,
    pub box_dimension: Option<f64>,
    /// `min_r μ_β(B_ε(ξ, r)) / r^{s₊}`.
    pub lower_mass_constant: f64,
    pub truncation_biased: bool,
}

impl DimensionOutcome {
    pub fn in_window(&self) -> bool {
        self.exponent >= self.s_minus - self.slack && self.exponent <= self.s_plus + self.slack
    }

    pub fn report(&self) -> VerificationReport {
        let status = if self.truncation_biased { Status::Inconclusive } else { Status::from_pass(self.in_window()) };
        let mut t = Table::new("boundaryBallMass", &["radius", "mass"]);
        for (r, m) in self.radii.iter().zip(&self.masses) {
            t.push(&[*r, *m]);
        }
        let mut r = VerificationReport::new("boundary-dimension", "boundary-ball-mass/exponent-window", status)
            .measure("exponent", self.exponent)
            .measure("lowerMassConstant", self.lower_mass_constant)
            .predict("sMinus", self.s_minus)
            .predict("sPlus", self.s_plus)
            .predict("slack", self.slack)
            .table(t);
        if let Some(b) = self.box_dimension {
            r = r.measure("frontierBoxDimension", b);
        }
        r
    }
}

/// Fits the exponent of `r ↦ μ_β(B_ε(ξ, r))` for the ideal end `ξ` of a
/// frontier vertex and compares it with `β/ε ± log C_d/(εR₀)`.
pub fn boundary_dimension_check(
    us: &UniformizedSpace,
    mu_beta: &MeasureField,
    xi: usize,
    radii: &[f64],
    inputs: DimensionInputs,
) -> Result<DimensionOutcome> {
    let k = us
        .frontier
        .iter()
        .position(|&v| v == xi)
        .ok_or_else(|| input(format!("vertex {xi} is not on the frontier")))?;
    let closure = us.closure()?;
    let mu = closure.extend(mu_beta)?;
    let g = closure.domain.graph();
    let from_xi = g.sssp(closure.ideal[k]);
    let top = 2.0 * g.length_scale();
    let mut used_r = Vec::new();
    let mut used_m = Vec::new();
    for &r in radii {
        if !(r > 0.0 && r <= top) {
            return Err(input(format!("radius {r} outside (0, 2 diam]")));
        }
        let m = mu.mass_of(&MetricGraph::ball_from_row(&from_xi, r));
        if m > 0.0 {
            used_r.push(r);
            used_m.push(m);
        }
    }
    if used_r.len() < 4 {
        return Err(LabError::Data(format!("only {} radii with positive ball mass; need 4", used_r.len())));
    }
    let lx: Vec<f64> = used_r.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = used_m.iter().map(|m| m.ln()).collect();
    let exponent = fit_slope(&lx, &ly);
    let eps = us.eps;
    let spread = inputs.cd.ln() / (eps * inputs.r0);
    let s_plus = inputs.beta / eps + spread;
    let lower_mass_constant = used_r
        .iter()
        .zip(&used_m)
        .map(|(r, m)| m / r.powf(s_plus))
        .fold(f64::INFINITY, f64::min);
    Ok(DimensionOutcome {
        xi,
        radii: used_r,
        masses: used_m,
        exponent,
        s_minus: inputs.beta / eps - spread,
        s_plus,
        slack: inputs.slack,
        box_dimension: box_dimension(g, &closure.ideal, radii),
        lower_mass_constant,
        truncation_biased: us.truncation_biased,
    })
}

/// Box-counting slope of the ideal point set: greedy covers at each radius,
/// fitted over radii where the count varies.
fn box_dimension(g: &MetricGraph, points: &[usize], radii: &[f64]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in radii {
        let mut nearest = vec![f64::INFINITY; points.len()];
        let mut count = 0;
        while let Some(i) = (0..points.len()).find(|&i| nearest[i] >= r) {
            count += 1;
            let row = g.sssp(points[i]);
            for (slot, &p) in nearest.iter_mut().zip(points) {
                *slot = slot.min(row[p]);
            }
        }
        xs.push((1.0 / r).ln());
        ys.push((count as f64).ln());
    }
    let varies = ys.iter().any(|&y| y != ys[0]);
    varies.then(|| fit_slope(&xs, &ys))
}
