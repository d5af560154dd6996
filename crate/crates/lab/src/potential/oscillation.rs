use serde::Serialize;

use super::{check_p, min_upper_gradient, EdgeMassField};
use crate::error::{input, Result};
use crate::measure::MeasureField;
use crate::metric::MetricGraph;
use crate::report::{Status, Table, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OscillationRow {
    pub r: f64,
    /// `osc u` over `B(x₀, 2r) ∖ {x₀}`.
    pub oscillation: f64,
    /// `(Σ_k ((2^{−k}r)^p / ν(B(x₀, 2^{−k}r)))^{1/(p−1)})^{1−1/p}`.
    pub dyadic_factor: f64,
    /// `(∫_{B(x₀, 2Λr)} g_u^p dν)^{1/p}`.
    pub energy_factor: f64,
    /// `oscillation / (dyadic_factor · energy_factor)`.
    pub constant: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OscillationOutcome {
    pub x0: usize,
    pub p: f64,
    pub lambda: f64,
    pub rows: Vec<OscillationRow>,
    /// Largest over smallest positive empirical constant.
    pub spread: f64,
    pub vacuous: bool,
}

impl OscillationOutcome {
    pub fn stable(&self) -> bool {
        self.spread <= 2.0
    }

    pub fn report(&self) -> VerificationReport {
        let mut t = Table::new("oscillation", &["r", "oscillation", "dyadicFactor", "energyFactor", "constant"]);
        for row in &self.rows {
            t.push(&[row.r, row.oscillation, row.dyadic_factor, row.energy_factor, row.constant]);
        }
        let status = if self.vacuous { Status::Inconclusive } else { Status::from_pass(self.stable()) };
        let mut r = VerificationReport::new("oscillation-bound", "punctured-harmonic/oscillation-energy", status)
            .measure("spread", self.spread)
            .predict("maxSpread", 2.0)
            .predict("Lambda", self.lambda)
            .table(t);
        if self.vacuous {
            r = r.note("the dyadic sum diverges (zero-mass small balls): the bound is vacuous");
        }
        r
    }
}

/// Evaluates both sides of the oscillation estimate for a function `u`
/// (typically `p`-harmonic off `x₀`) at each radius and reports the
/// empirical constants.
pub fn oscillation_bound_check(
    g: &MetricGraph,
    mu: &MeasureField,
    u: &[f64],
    x0: usize,
    p: f64,
    lambda: f64,
    radii: &[f64],
) -> Result<OscillationOutcome> {
    check_p(p, 1.0)?;
    if p == 1.0 {
        return Err(input("the dyadic sum needs p > 1"));
    }
    g.check_vertex(x0)?;
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(input("radii must be positive"));
    }
    let m = EdgeMassField::from_vertex_masses(g, mu)?;
    let grad = min_upper_gradient(g, u)?;
    let d = g.sssp(x0);
    let ball_mass = |r: f64| mu.mass_of(&MetricGraph::ball_from_row(&d, r));
    let expo = 1.0 / (p - 1.0);
    let mut rows = Vec::with_capacity(radii.len());
    let mut vacuous = false;
    for &r in radii {
        let ring: Vec<usize> = (0..g.len()).filter(|&v| v != x0 && d[v] < 2.0 * r).collect();
        let oscillation = if ring.is_empty() {
            0.0
        } else {
            let hi = ring.iter().map(|&v| u[v]).fold(f64::NEG_INFINITY, f64::max);
            let lo = ring.iter().map(|&v| u[v]).fold(f64::INFINITY, f64::min);
            hi - lo
        };
        // once the ball is {x₀} the terms are geometric with ratio 2^{−p/(p−1)}
        let nearest = (0..g.len()).filter(|&v| v != x0).map(|v| d[v]).fold(f64::INFINITY, f64::min);
        let mut sum = 0.0;
        let mut k = 0;
        loop {
            let rk = r * 0.5f64.powi(k);
            let mass = ball_mass(rk);
            if mass <= 0.0 {
                sum = f64::INFINITY;
                break;
            }
            let term = (rk.powf(p) / mass).powf(expo);
            if rk <= nearest {
                sum += term / (1.0 - 0.5f64.powf(p * expo));
                break;
            }
            sum += term;
            k += 1;
        }
        let dyadic_factor = sum.powf(1.0 - 1.0 / p);
        let outer = 2.0 * lambda * r;
        let energy: f64 = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| d[e.u] < outer && d[e.v] < outer)
            .map(|(i, _)| m.mass(i) * grad[i].powf(p))
            .sum();
        let energy_factor = energy.powf(1.0 / p);
        let rhs = dyadic_factor * energy_factor;
        vacuous |= !dyadic_factor.is_finite();
        let constant = if oscillation == 0.0 { 0.0 } else { oscillation / rhs };
        rows.push(OscillationRow {
            r,
            oscillation,
            dyadic_factor,
            energy_factor,
            constant,
        });
    }
    let positive: Vec<f64> = rows.iter().map(|r| r.constant).filter(|&c| c > 0.0 && c.is_finite()).collect();
    let spread = if positive.is_empty() {
        1.0
    } else {
        positive.iter().copied().fold(0.0, f64::max) / positive.iter().copied().fold(f64::INFINITY, f64::min)
    };
    Ok(OscillationOutcome {
        x0,
        p,
        lambda,
        rows,
        spread,
        vacuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_square, vertex_at};
    use crate::potential::{solve_p_harmonic, SolveOptions};

    #[test]
    fn constant_function_has_zero_oscillation() {
        let md = gen_square(0.25).unwrap();
        let g = md.domain.graph();
        let x0 = vertex_at(g, [0.0, 0.0]).unwrap();
        let u = vec![1.0; g.len()];
        let o = oscillation_bound_check(g, &md.measure, &u, x0, 2.0, 2.0, &[0.25, 0.5]).unwrap();
        assert!(o.rows.iter().all(|r| r.oscillation == 0.0 && r.constant == 0.0));
    }

    #[test]
    fn punctured_square_is_stable() {
        let md = gen_square(1.0 / 16.0).unwrap();
        let g = md.domain.graph();
        let x0 = vertex_at(g, [0.0, 0.0]).unwrap();
        // unit mass at the puncture keeps the dyadic sum finite
        let mut masses = md.measure.masses().to_vec();
        masses[x0] = masses[x0].max(1.0 / 256.0);
        let mu = MeasureField::new(masses).unwrap();
        let mut dir: Vec<(usize, f64)> = md.domain.boundary().into_iter().map(|v| (v, 0.0)).collect();
        dir.push((x0, 1.0));
        let sol = solve_p_harmonic(g, &mu, &dir, &SolveOptions::new(2.0, 1e-10)).unwrap();
        let o = oscillation_bound_check(g, &mu, sol.u.values(), x0, 2.0, 2.0, &[0.25, 0.5]).unwrap();
        assert!(!o.vacuous);
        assert!(o.stable(), "{o:?}");
    }
}
