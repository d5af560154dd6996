use std::collections::VecDeque;

use serde::Serialize;

use super::{check_p, EdgeMassField, FunctionField};
use crate::error::{input, LabError, Result};
use crate::linalg::{EnvelopeCholesky, SymMatrix};
use crate::measure::MeasureField;
use crate::metric::MetricGraph;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub p: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Starting values; the `p = 2` solution when absent.
    pub initial: Option<Vec<f64>>,
}

impl SolveOptions {
    pub fn new(p: f64, tol: f64) -> Self {
        Self {
            p,
            tol,
            max_iter: 200,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveResult {
    pub u: FunctionField,
    pub energy: f64,
    pub iterations: usize,
    /// Largest free-vertex gradient entry, less the error of evaluating it in
    /// floating point, relative to the largest total incident flux magnitude.
    pub kkt_residual: f64,
    pub converged: bool,
}

/// Gradient weights are floored at this multiple of the data scale.
const FLOOR: f64 = 1e-12;

/// `Σ_e c_e |Δ_e u|^p + Σ_v a_v |u_v|^p` with some vertices held fixed.
#[derive(Clone)]
pub(crate) struct Problem<'a> {
    pub g: &'a MetricGraph,
    pub mass: Vec<f64>,
    /// `m_e / ℓ_e^p`.
    pub coupling: Vec<f64>,
    pub potential: Vec<f64>,
    pub fixed: Vec<Option<f64>>,
    pub p: f64,
    /// Free vertices not reachable from any anchor are set to zero instead of
    /// rejected (they do not affect the objective).
    pub zero_uncoupled: bool,
}

impl Problem<'_> {
    pub fn new<'g>(g: &'g MetricGraph, m: &EdgeMassField, p: f64) -> Problem<'g> {
        let mut problem = Problem {
            g,
            mass: m.masses().to_vec(),
            coupling: Vec::new(),
            potential: vec![0.0; g.len()],
            fixed: vec![None; g.len()],
            p,
            zero_uncoupled: false,
        };
        problem.set_p(p);
        problem
    }

    pub fn set_p(&mut self, p: f64) {
        self.p = p;
        self.coupling = self.g.edges().iter().zip(&self.mass).map(|(e, me)| me / e.len.powf(p)).collect();
    }

    pub fn objective(&self, u: &[f64]) -> f64 {
        let p = self.p;
        let edges: f64 = self
            .g
            .edges()
            .iter()
            .zip(&self.coupling)
            .map(|(e, c)| c * (u[e.u] - u[e.v]).abs().powf(p))
            .sum();
        let verts: f64 = self.potential.iter().zip(u).map(|(a, x)| a * x.abs().powf(p)).sum();
        edges + verts
    }

    /// Gradient and, per vertex, the sum of absolute flux magnitudes.
    fn gradient(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let p = self.p;
        let mut grad = vec![0.0; u.len()];
        let mut scale = vec![0.0; u.len()];
        for (e, c) in self.g.edges().iter().zip(&self.coupling) {
            let d = u[e.u] - u[e.v];
            let f = p * c * d.abs().powf(p - 1.0);
            grad[e.u] += f * d.signum();
            grad[e.v] -= f * d.signum();
            scale[e.u] += f;
            scale[e.v] += f;
        }
        for (i, a) in self.potential.iter().enumerate() {
            let f = p * a * u[i].abs().powf(p - 1.0);
            grad[i] += f * u[i].signum();
            scale[i] += f;
        }
        (grad, scale)
    }

    fn curvature(&self, s: f64, floor: f64) -> f64 {
        let p = self.p;
        p * (p - 1.0) * s.max(floor).powf(p - 2.0)
    }

    /// Per vertex, a bound on the gradient error caused by rounding `u`.
    fn rounding_floor(&self, u: &[f64]) -> Vec<f64> {
        let p = self.p;
        let flux = |c: f64, d: f64, delta: f64| p * c * ((d.abs() + delta).powf(p - 1.0) - d.abs().powf(p - 1.0));
        let mut floor = vec![0.0; u.len()];
        for (e, c) in self.g.edges().iter().zip(&self.coupling) {
            let delta = 4.0 * f64::EPSILON * (u[e.u].abs() + u[e.v].abs());
            let f = flux(*c, u[e.u] - u[e.v], delta);
            floor[e.u] += f;
            floor[e.v] += f;
        }
        for (i, a) in self.potential.iter().enumerate() {
            floor[i] += flux(*a, u[i], 4.0 * f64::EPSILON * u[i].abs());
        }
        floor
    }

    /// Largest free gradient entry beyond its rounding floor, relative to the
    /// largest flux magnitude.
    fn kkt(&self, free: &[usize], u: &[f64]) -> f64 {
        let (grad, scale) = self.gradient(u);
        let floor = self.rounding_floor(u);
        let g_max = free.iter().map(|&i| (grad[i].abs() - floor[i]).max(0.0)).fold(0.0, f64::max);
        let s_max = free.iter().map(|&i| scale[i]).fold(0.0, f64::max);
        if s_max > 0.0 {
            g_max / s_max
        } else {
            g_max
        }
    }

    /// Free vertices not connected, through positive couplings, to a fixed
    /// vertex or a vertex with positive potential.
    fn uncoupled(&self) -> Vec<usize> {
        let n = self.g.len();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&v| self.fixed[v].is_some() || self.potential[v] > 0.0)
            .collect();
        for &v in &queue {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &(w, e) in self.g.neighbors(v) {
                if !seen[w] && self.coupling[e] > 0.0 {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..n).filter(|&v| !seen[v]).collect()
    }

    pub fn solve(mut self, tol: f64, max_iter: usize, initial: Option<Vec<f64>>) -> Result<SolveResult> {
        if !(tol > 0.0) {
            return Err(input("solver tolerance must be positive"));
        }
        let lonely = self.uncoupled();
        if !lonely.is_empty() {
            if !self.zero_uncoupled {
                return Err(LabError::Precondition(format!(
                    "{} free vertices (e.g. {}) lie in a component without boundary data",
                    lonely.len(),
                    lonely[0]
                )));
            }
            for v in lonely {
                self.fixed[v] = Some(0.0);
            }
        }
        let n = self.g.len();
        let free: Vec<usize> = (0..n).filter(|&v| self.fixed[v].is_none()).collect();
        let mut slot = vec![usize::MAX; n];
        for (k, &v) in free.iter().enumerate() {
            slot[v] = k;
        }
        let mut u = match initial {
            Some(init) if init.len() == n => init,
            Some(init) => return Err(input(format!("initial guess has {} values for {n} vertices", init.len()))),
            None if self.p != 2.0 => {
                let mut quadratic = self.clone();
                quadratic.set_p(2.0);
                quadratic.solve(tol, max_iter, None)?.u.into_inner()
            }
            None => vec![0.0; n],
        };
        for (v, f) in self.fixed.iter().enumerate() {
            if let Some(val) = f {
                u[v] = *val;
            }
        }
        let data_scale = self
            .fixed
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(1.0f64, f64::max);
        let floor = FLOOR * data_scale;

        let mut energy = self.objective(&u);
        let mut rel_decrease = f64::INFINITY;
        let mut iterations = 0;
        let mut kkt = self.kkt(&free, &u);
        while iterations < max_iter && !free.is_empty() {
            if kkt <= tol && rel_decrease < tol {
                break;
            }
            iterations += 1;
            let (grad, _) = self.gradient(&u);
            let mut h = SymMatrix::new(free.len());
            for (e, c) in self.g.edges().iter().zip(&self.coupling) {
                if *c == 0.0 {
                    continue;
                }
                let w = c * self.curvature((u[e.u] - u[e.v]).abs(), floor);
                let (a, b) = (slot[e.u], slot[e.v]);
                if a != usize::MAX {
                    h.add_diag(a, w);
                }
                if b != usize::MAX {
                    h.add_diag(b, w);
                }
                if a != usize::MAX && b != usize::MAX {
                    h.add_off(a, b, -w);
                }
            }
            for (k, &v) in free.iter().enumerate() {
                if self.potential[v] > 0.0 {
                    h.add_diag(k, self.potential[v] * self.curvature(u[v].abs(), floor));
                }
            }
            let rhs: Vec<f64> = free.iter().map(|&v| -grad[v]).collect();
            let newton = EnvelopeCholesky::factor(&h)?.solve(&rhs);
            let slope: f64 = newton.iter().zip(&rhs).map(|(d, r)| -d * r).sum();
            let direction = if slope < 0.0 {
                newton
            } else {
                rhs.clone()
            };
            match self.line_search(&free, &u, &direction, energy, &rhs) {
                Some((next, e_next)) => {
                    rel_decrease = (energy - e_next) / energy.abs().max(f64::MIN_POSITIVE);
                    u = next;
                    energy = e_next;
                }
                None => {
                    // energy changes are below rounding; keep polishing the residual
                    let mut trial = u.clone();
                    for (k, &v) in free.iter().enumerate() {
                        trial[v] += direction[k];
                    }
                    let next_kkt = self.kkt(&free, &trial);
                    if next_kkt < kkt {
                        energy = self.objective(&trial);
                        u = trial;
                        rel_decrease = 0.0;
                        kkt = next_kkt;
                        continue;
                    }
                    break;
                }
            }
            kkt = self.kkt(&free, &u);
        }
        if free.is_empty() {
            kkt = 0.0;
        }
        let converged = kkt <= tol;
        Ok(SolveResult {
            u: FunctionField::new(u)?,
            energy,
            iterations,
            kkt_residual: kkt,
            converged,
        })
    }

    /// Armijo backtracking along `d`; `None` when no step decreases the
    /// objective (stagnation at rounding level).
    fn line_search(&self, free: &[usize], u: &[f64], d: &[f64], energy: f64, neg_grad: &[f64]) -> Option<(Vec<f64>, f64)> {
        let slope: f64 = d.iter().zip(neg_grad).map(|(a, b)| -a * b).sum();
        let mut t = 1.0;
        let mut trial = u.to_vec();
        for _ in 0..60 {
            for (k, &v) in free.iter().enumerate() {
                trial[v] = u[v] + t * d[k];
            }
            let e = self.objective(&trial);
            if e <= energy + 1e-4 * t * slope {
                return (e < energy).then_some((trial, e));
            }
            t *= 0.5;
        }
        None
    }

}

fn dirichlet_fixed(n: usize, dirichlet: &[(usize, f64)]) -> Result<Vec<Option<f64>>> {
    if dirichlet.is_empty() {
        return Err(input("boundary set must be nonempty"));
    }
    let mut fixed = vec![None; n];
    for &(v, val) in dirichlet {
        if v >= n {
            return Err(LabError::UnknownVertex(v));
        }
        if !val.is_finite() {
            return Err(input(format!("boundary value at vertex {v} is not finite")));
        }
        fixed[v] = Some(val);
    }
    Ok(fixed)
}

/// Minimizes the `p`-energy with edge masses derived from `mu` subject to the
/// boundary data.
pub fn solve_p_harmonic(g: &MetricGraph, mu: &MeasureField, dirichlet: &[(usize, f64)], opts: &SolveOptions) -> Result<SolveResult> {
    let m = EdgeMassField::from_vertex_masses(g, mu)?;
    solve_with_edge_masses(g, &m, dirichlet, opts)
}

/// Same as [`solve_p_harmonic`] with explicit edge masses.
pub fn solve_with_edge_masses(g: &MetricGraph, m: &EdgeMassField, dirichlet: &[(usize, f64)], opts: &SolveOptions) -> Result<SolveResult> {
    check_p(opts.p, 1.0)?;
    if opts.p == 1.0 {
        return Err(LabError::Unsupported("p = 1: minimizers are not unique".into()));
    }
    if m.masses().len() != g.edges().len() {
        return Err(input("edge mass field does not match the graph"));
    }
    let mut problem = Problem::new(g, m, opts.p);
    problem.fixed = dirichlet_fixed(g.len(), dirichlet)?;
    problem.solve(opts.tol, opts.max_iter, opts.initial.clone())
}
