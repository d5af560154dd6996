use serde::Serialize;

use super::solver::Problem;
use super::{check_p, EdgeMassField, FunctionField};
use crate::error::{input, LabError, Result};
use crate::measure::MeasureField;
use crate::metric::MetricGraph;
use crate::report::{Status, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CapacityKind {
    Sobolev,
    Variational,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CapacityResult {
    pub kind: CapacityKind,
    pub value: f64,
    pub minimizer: FunctionField,
    pub converged: bool,
}

fn check_set(g: &MetricGraph, set: &[usize], name: &str) -> Result<()> {
    for &v in set {
        if v >= g.len() {
            return Err(LabError::UnknownVertex(v));
        }
    }
    if set.is_empty() {
        return Err(input(format!("{name} must be nonempty")));
    }
    Ok(())
}

fn finish(problem: &Problem<'_>, kind: CapacityKind, raw: super::SolveResult) -> Result<CapacityResult> {
    let clamped: Vec<f64> = raw.u.values().iter().map(|x| x.clamp(0.0, 1.0)).collect();
    let value = problem.objective(&clamped);
    Ok(CapacityResult {
        kind,
        value,
        minimizer: FunctionField::new(clamped)?,
        converged: raw.converged,
    })
}

/// `C_p(E) = inf Σ_v ν(v)|u(v)|^p + Σ_e m_e g_e^p` over `u = 1` on `E`.
pub fn sobolev_capacity(g: &MetricGraph, mu: &MeasureField, set: &[usize], p: f64, tol: f64) -> Result<CapacityResult> {
    check_p(p, 1.0)?;
    if p == 1.0 {
        return Err(LabError::Unsupported("p = 1: minimizers are not unique".into()));
    }
    check_set(g, set, "capacity set")?;
    let m = EdgeMassField::from_vertex_masses(g, mu)?;
    let mut problem = Problem::new(g, &m, p);
    problem.potential = mu.masses().to_vec();
    problem.zero_uncoupled = true;
    for &v in set {
        problem.fixed[v] = Some(1.0);
    }
    let raw = problem.clone().solve(tol, 200, None)?;
    finish(&problem, CapacityKind::Sobolev, raw)
}

/// `cap_p(E, Ω) = inf Σ_e m_e g_e^p` over `u = 1` on `E`, `u = 0` off `Ω`.
pub fn variational_capacity(g: &MetricGraph, mu: &MeasureField, set: &[usize], omega: &[usize], p: f64, tol: f64) -> Result<CapacityResult> {
    check_p(p, 1.0)?;
    if p == 1.0 {
        return Err(LabError::Unsupported("p = 1: minimizers are not unique".into()));
    }
    check_set(g, set, "capacity set")?;
    check_set(g, omega, "open set")?;
    let mut inside = vec![false; g.len()];
    for &v in omega {
        inside[v] = true;
    }
    if let Some(v) = set.iter().find(|&&v| !inside[v]) {
        return Err(input(format!("vertex {v} of the capacity set lies outside the open set")));
    }
    let m = EdgeMassField::from_vertex_masses(g, mu)?;
    let mut problem = Problem::new(g, &m, p);
    problem.zero_uncoupled = true;
    for (v, &ins) in inside.iter().enumerate() {
        if !ins {
            problem.fixed[v] = Some(0.0);
        }
    }
    for &v in set {
        problem.fixed[v] = Some(1.0);
    }
    let raw = problem.clone().solve(tol, 200, None)?;
    finish(&problem, CapacityKind::Variational, raw)
}

/// Evaluation of the five equivalent "not concentrated at a point"
/// conditions for the Sobolev capacity restricted to a finite proxy set `Z`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportReport {
    pub proxy: Vec<usize>,
    pub ball_radius: f64,
    pub tol_cap: f64,
    /// Capacity of the proxy ball around each proxy vertex.
    pub ball_capacities: Vec<f64>,
    /// Capacity of `Z ∖ {a}` for each proxy vertex `a`.
    pub complement_capacities: Vec<f64>,
    pub support: Vec<usize>,
    /// (i) two disjoint sets of positive capacity, (ii) a set and its
    /// complement positive, (iii) the same for an open proxy ball,
    /// (iv) support with two points, (v) not concentrated at one point.
    pub conditions: [bool; 5],
}

impl SupportReport {
    pub fn all_agree(&self) -> bool {
        self.conditions.iter().all(|&c| c == self.conditions[0])
    }

    pub fn joint(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }

    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("capacity-support", "boundary-capacity/support-characterization", Status::from_pass(self.all_agree()))
            .measure("supportSize", self.support.len() as f64)
            .measure("tolCap", self.tol_cap)
            .measure("ballRadius", self.ball_radius)
            .note(format!("conditions (i)-(v): {:?}", self.conditions));
        for (k, &v) in self.proxy.iter().enumerate() {
            r = r.witness("proxyVertex", vec![v], vec![self.ball_capacities[k], self.complement_capacities[k]]);
        }
        r
    }
}

/// Support of the capacity on the proxy set and the five conditions.
/// `ball_radius` defaults to half the smallest positive distance between
/// proxy vertices, so proxy balls are singletons.
pub fn capacity_support(
    g: &MetricGraph,
    mu: &MeasureField,
    proxy: &[usize],
    p: f64,
    ball_radius: Option<f64>,
    tol_cap: f64,
    tol: f64,
) -> Result<SupportReport> {
    check_set(g, proxy, "boundary proxy")?;
    let rows: Vec<Vec<f64>> = proxy.iter().map(|&v| g.sssp(v)).collect();
    let r = match ball_radius {
        Some(r) if r > 0.0 => r,
        Some(_) => return Err(input("ball radius must be positive")),
        None => {
            let min = rows
                .iter()
                .flat_map(|row| proxy.iter().map(move |&w| row[w]))
                .filter(|&d| d > 0.0)
                .fold(f64::INFINITY, f64::min);
            if min.is_finite() {
                min / 2.0
            } else {
                1.0
            }
        }
    };
    let cap = |set: &[usize]| -> Result<f64> {
        if set.is_empty() {
            Ok(0.0)
        } else {
            Ok(sobolev_capacity(g, mu, set, p, tol)?.value)
        }
    };
    let mut ball_caps = Vec::with_capacity(proxy.len());
    let mut comp_caps = Vec::with_capacity(proxy.len());
    let mut single_caps = Vec::with_capacity(proxy.len());
    for (k, &a) in proxy.iter().enumerate() {
        let ball: Vec<usize> = proxy.iter().copied().filter(|&w| rows[k][w] < r).collect();
        ball_caps.push(cap(&ball)?);
        let rest: Vec<usize> = proxy.iter().copied().filter(|&w| w != a).collect();
        comp_caps.push(cap(&rest)?);
        single_caps.push(cap(&[a])?);
    }
    let pos = |c: f64| c > tol_cap;
    let support: Vec<usize> = proxy.iter().zip(&ball_caps).filter(|(_, &c)| pos(c)).map(|(&v, _)| v).collect();
    let cond_i = single_caps.iter().filter(|&&c| pos(c)).count() >= 2;
    let cond_ii = single_caps.iter().zip(&comp_caps).any(|(&s, &c)| pos(s) && pos(c));
    let mut cond_iii = false;
    for (k, _) in proxy.iter().enumerate() {
        let outside: Vec<usize> = proxy.iter().copied().filter(|&w| rows[k][w] >= r).collect();
        if pos(ball_caps[k]) && pos(cap(&outside)?) {
            cond_iii = true;
            break;
        }
    }
    let cond_iv = support.len() >= 2;
    let cond_v = comp_caps.iter().all(|&c| pos(c));
    Ok(SupportReport {
        proxy: proxy.to_vec(),
        ball_radius: r,
        tol_cap,
        ball_capacities: ball_caps,
        complement_capacities: comp_caps,
        support,
        conditions: [cond_i, cond_ii, cond_iii, cond_iv, cond_v],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Edge;

    fn path(n: usize) -> MetricGraph {
        MetricGraph::new(n, (0..n - 1).map(|i| Edge { u: i, v: i + 1, len: 1.0 }).collect()).unwrap()
    }

    #[test]
    fn full_set_gives_total_mass() {
        let g = path(5);
        let mu = MeasureField::new(vec![1.0, 2.0, 0.5, 0.25, 3.0]).unwrap();
        let all: Vec<usize> = (0..5).collect();
        let c = sobolev_capacity(&g, &mu, &all, 2.0, 1e-10).unwrap();
        assert!((c.value - mu.total()).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_the_set() {
        let g = path(7);
        let mu = MeasureField::uniform(7, 1.0).unwrap();
        let a = sobolev_capacity(&g, &mu, &[3], 2.0, 1e-10).unwrap().value;
        let b = sobolev_capacity(&g, &mu, &[3, 4], 2.0, 1e-10).unwrap().value;
        assert!(a <= b + 1e-12);
    }

    #[test]
    fn variational_capacity_of_a_path_end() {
        let n = 5;
        let g = path(n + 1);
        let mu = MeasureField::uniform(n + 1, 1.0).unwrap();
        let omega: Vec<usize> = (0..n).collect();
        let c = variational_capacity(&g, &mu, &[0], &omega, 2.0, 1e-12).unwrap();
        // edge masses 1 + 1/2 at the two end edges, 1/2 + 1/2 inside; in series
        let m: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { 1.5 } else { 1.0 }).collect();
        let resistance: f64 = m.iter().map(|x| 1.0 / x).sum();
        assert!((c.value - 1.0 / resistance).abs() < 1e-10, "{} vs {}", c.value, 1.0 / resistance);
        let all: Vec<usize> = (0..=n).collect();
        assert_eq!(variational_capacity(&g, &mu, &all, &all, 2.0, 1e-12).unwrap().value, 0.0);
        assert!(variational_capacity(&g, &mu, &[n], &omega, 2.0, 1e-12).is_err());
    }

    #[test]
    fn two_heavy_ends_versus_one() {
        let g = path(9);
        let both = MeasureField::new(vec![5.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0]).unwrap();
        let r = capacity_support(&g, &both, &[0, 8], 2.0, None, 1e-9, 1e-10).unwrap();
        assert!(r.joint(), "{r:?}");
        let one = MeasureField::new(vec![5.0, 5.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let r = capacity_support(&g, &one, &[0, 8], 2.0, None, 1e-9, 1e-10).unwrap();
        assert!(r.conditions.iter().all(|&c| !c), "{r:?}");
        // all mass in the middle: neither end carries capacity
        let none = MeasureField::new(vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let r = capacity_support(&g, &none, &[0, 8], 2.0, None, 1e-9, 1e-10).unwrap();
        assert!(r.support.is_empty() && !r.conditions[3]);
    }
}
