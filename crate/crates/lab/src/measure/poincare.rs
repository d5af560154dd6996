use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use super::MeasureField;
use crate::error::{input, Result};
use crate::metric::MetricGraph;
use crate::potential::EdgeMassField;
use crate::report::{Status, VerificationReport};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub center: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PoincareOptions {
    pub p: f64,
    pub lambda: f64,
    pub test_budget: usize,
    pub seed: u64,
}

impl Default for PoincareOptions {
    fn default() -> Self {
        Self {
            p: 2.0,
            lambda: 1.0,
            test_budget: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PoincareReport {
    pub p: f64,
    pub lambda: f64,
    pub center: usize,
    pub radius: f64,
    pub ball_size: usize,
    pub diameter: f64,
    /// Largest ratio over the test family; a lower bound for the constant.
    pub lower_bound_cpi: f64,
    /// `p = 2, λ = 1`: `1/(diam·√λ₁)` from the smallest nonzero eigenvalue of
    /// the weighted Laplacian pencil on the ball.
    pub exact_l2_constant: Option<f64>,
    /// Upper bound that every test ratio must respect (Jensen: the mean
    /// absolute deviation is at most the root-mean-square deviation).
    pub certified_upper: Option<f64>,
    pub witness: String,
    /// Vertex components of the ball support when the dilated ball splits it.
    pub split_components: Vec<Vec<usize>>,
}

impl PoincareReport {
    pub fn report(&self) -> VerificationReport {
        let consistent = self
            .certified_upper
            .is_none_or(|u| self.lower_bound_cpi <= u * (1.0 + 1e-9));
        let status = if !self.lower_bound_cpi.is_finite() {
            Status::Fail
        } else {
            Status::from_pass(consistent)
        };
        let mut r = VerificationReport::new("poincare", "poincare-inequality/ball-constant", status)
            .measure("lowerBoundCPI", self.lower_bound_cpi)
            .measure("p", self.p)
            .measure("lambda", self.lambda)
            .measure("radius", self.radius)
            .measure("diameter", self.diameter)
            .note(format!("lower bound from test family; best test function: {}", self.witness));
        if let Some(c) = self.exact_l2_constant {
            r = r.measure("exactL2Constant", c).note("spectral (2,2) value on the ball");
        }
        if let Some(c) = self.certified_upper {
            r = r.predict("certifiedUpper", c);
        }
        for comp in &self.split_components {
            r = r.witness("component", comp.clone(), vec![]);
        }
        r
    }
}

struct BallData {
    in_ball: Vec<bool>,
    in_dilated: Vec<bool>,
    ball: Vec<usize>,
    dilated_mass: f64,
    ball_mass: f64,
    /// Edges with both endpoints in the dilated ball, with their weights
    /// `m_e / ℓ_e^p` split as `(edge index, m_e)`.
    dilated_edges: Vec<(usize, f64)>,
}

/// Test-family lower bound for the Poincaré constant on one ball, plus the
/// spectral value when `p = 2` and `λ = 1`.
pub fn poincare_constant(g: &MetricGraph, mu: &MeasureField, ball: BallSpec, opts: PoincareOptions) -> Result<PoincareReport> {
    mu.check_len(g.len())?;
    g.check_vertex(ball.center)?;
    if !(opts.p >= 1.0) || !(opts.lambda >= 1.0) || !(ball.radius > 0.0) {
        return Err(input("need p ≥ 1, λ ≥ 1 and a positive radius"));
    }
    let from_center = g.sssp(ball.center);
    let masses = mu.masses();
    let edge_mass = EdgeMassField::from_vertex_masses(g, mu)?;
    let in_ball: Vec<bool> = from_center.iter().map(|&d| d < ball.radius).collect();
    let in_dilated: Vec<bool> = from_center.iter().map(|&d| d < opts.lambda * ball.radius).collect();
    let ball_vertices: Vec<usize> = (0..g.len()).filter(|&v| in_ball[v]).collect();
    let ball_mass: f64 = ball_vertices.iter().map(|&v| masses[v]).sum();
    if !(ball_mass > 0.0) {
        return Err(input("ball has zero mass"));
    }
    let dilated_mass: f64 = (0..g.len()).filter(|&v| in_dilated[v]).map(|v| masses[v]).sum();
    let dilated_edges: Vec<(usize, f64)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| in_dilated[e.u] && in_dilated[e.v])
        .map(|(i, _)| (i, edge_mass.mass(i)))
        .collect();
    let data = BallData {
        in_ball,
        in_dilated,
        ball: ball_vertices,
        dilated_mass,
        ball_mass,
        dilated_edges,
    };

    let mut diameter: f64 = 0.0;
    for &v in &data.ball {
        let row = g.sssp(v);
        for &w in &data.ball {
            diameter = diameter.max(row[w]);
        }
    }

    let components = support_components(g, mu, &data);
    let mut report = PoincareReport {
        p: opts.p,
        lambda: opts.lambda,
        center: ball.center,
        radius: ball.radius,
        ball_size: data.ball.len(),
        diameter,
        lower_bound_cpi: 0.0,
        exact_l2_constant: None,
        certified_upper: None,
        witness: String::from("none"),
        split_components: Vec::new(),
    };
    if components.len() > 1 {
        report.lower_bound_cpi = f64::INFINITY;
        report.witness = String::from("indicator of one support component");
        report.split_components = components;
        return Ok(report);
    }
    if diameter == 0.0 {
        return Ok(report);
    }

    let ratio = |u: &[f64]| -> f64 { test_ratio(g, masses, &data, u, opts.p, diameter) };
    let mut rng = sampling::rng(opts.seed);
    let dilated: Vec<usize> = (0..g.len()).filter(|&v| data.in_dilated[v]).collect();
    let pick = |rng: &mut rand_chacha::ChaCha8Rng| dilated[rng.gen_range(0..dilated.len())];
    let mut best = 0.0;
    let mut best_name = String::from("none");
    let outer = opts.lambda * ball.radius;
    for i in 0..opts.test_budget {
        let (name, u): (String, Vec<f64>) = match i % 3 {
            0 => {
                let a = pick(&mut rng);
                (format!("distance to vertex {a}"), g.sssp(a))
            }
            1 => {
                let a = pick(&mut rng);
                let s = rng.gen_range(0.0..ball.radius);
                let w = rng.gen_range(0.05..1.0) * ball.radius;
                let row = g.sssp(a);
                let u = row.iter().map(|&d| ((d - s) / w).clamp(0.0, 1.0)).collect();
                (format!("smoothed cut around vertex {a}"), u)
            }
            _ => {
                let mut u = vec![0.0; g.len()];
                for _ in 0..3 {
                    let a = pick(&mut rng);
                    let c = rng.gen_range(-1.0..1.0);
                    let k = rng.gen_range(0.25..2.0);
                    let row = g.sssp(a);
                    for (slot, &d) in u.iter_mut().zip(&row) {
                        *slot += c * (std::f64::consts::PI * k * d / outer).cos();
                    }
                }
                (String::from("low-frequency field"), u)
            }
        };
        let r = ratio(&u);
        if r > best {
            best = r;
            best_name = name;
        }
    }

    if opts.p == 2.0 && opts.lambda == 1.0 {
        if let Some((lambda1, vector)) = spectral_gap(g, masses, &edge_mass, &data) {
            let c = 1.0 / (diameter * lambda1.sqrt());
            report.exact_l2_constant = Some(c);
            report.certified_upper = Some(c);
            let r = ratio(&vector);
            if r > best {
                best = r;
                best_name = String::from("first nonconstant eigenvector");
            }
        }
    }
    report.lower_bound_cpi = best;
    report.witness = best_name;
    Ok(report)
}

fn test_ratio(g: &MetricGraph, masses: &[f64], data: &BallData, u: &[f64], p: f64, diameter: f64) -> f64 {
    let mean = data.ball.iter().map(|&v| masses[v] * u[v]).sum::<f64>() / data.ball_mass;
    let mad = data.ball.iter().map(|&v| masses[v] * (u[v] - mean).abs()).sum::<f64>() / data.ball_mass;
    if mad == 0.0 {
        return 0.0;
    }
    let energy: f64 = data
        .dilated_edges
        .iter()
        .map(|&(i, m)| {
            let e = g.edge(i);
            m * ((u[e.u] - u[e.v]).abs() / e.len).powf(p)
        })
        .sum();
    let mean_energy = energy / data.dilated_mass;
    if mean_energy == 0.0 {
        return f64::INFINITY;
    }
    mad / (diameter * mean_energy.powf(1.0 / p))
}

/// Components of the dilated-ball subgraph containing positive-mass ball
/// vertices; more than one means the inequality fails outright.
fn support_components(g: &MetricGraph, mu: &MeasureField, data: &BallData) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; g.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in &data.ball {
        if mu.mass(s) == 0.0 || label[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = Vec::new();
        let mut stack = vec![s];
        label[s] = id;
        while let Some(v) = stack.pop() {
            if data.in_ball[v] && mu.mass(v) > 0.0 {
                members.push(v);
            }
            for &(w, _) in g.neighbors(v) {
                if data.in_dilated[w] && label[w] == usize::MAX {
                    label[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// Smallest nonzero eigenvalue of `L u = λ M u` on the ball (zero-mass
/// vertices eliminated by a Schur complement) and its eigenvector extended
/// harmonically to them.
fn spectral_gap(g: &MetricGraph, masses: &[f64], edge_mass: &EdgeMassField, data: &BallData) -> Option<(f64, Vec<f64>)> {
    let verts = &data.ball;
    let mut local = vec![usize::MAX; g.len()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let n = verts.len();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for (i, e) in g.edges().iter().enumerate() {
        if data.in_ball[e.u] && data.in_ball[e.v] {
            let w = edge_mass.mass(i) / (e.len * e.len);
            let (a, b) = (local[e.u], local[e.v]);
            lap[(a, a)] += w;
            lap[(b, b)] += w;
            lap[(a, b)] -= w;
            lap[(b, a)] -= w;
        }
    }
    let pos: Vec<usize> = (0..n).filter(|&i| masses[verts[i]] > 0.0).collect();
    let zero: Vec<usize> = (0..n).filter(|&i| masses[verts[i]] == 0.0).collect();
    if pos.len() < 2 {
        return None;
    }
    let sub = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |r, c| lap[(rows[r], cols[c])]);
    let lpp = sub(&pos, &pos);
    let (schur, elim) = if zero.is_empty() {
        (lpp, None)
    } else {
        let lzz = sub(&zero, &zero);
        let lzp = sub(&zero, &pos);
        let chol = lzz.cholesky()?;
        let x = chol.solve(&lzp);
        (lpp - sub(&pos, &zero) * &x, Some(x))
    };
    let inv_sqrt: Vec<f64> = pos.iter().map(|&i| 1.0 / masses[verts[i]].sqrt()).collect();
    let a = DMatrix::from_fn(pos.len(), pos.len(), |r, c| inv_sqrt[r] * schur[(r, c)] * inv_sqrt[c]);
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let k = order[1];
    let lambda1 = eig.eigenvalues[k];
    if !(lambda1 > 0.0) {
        return None;
    }
    let mut u = vec![0.0; g.len()];
    let y: Vec<f64> = (0..pos.len()).map(|r| eig.eigenvectors[(r, k)] * inv_sqrt[r]).collect();
    for (r, &i) in pos.iter().enumerate() {
        u[verts[i]] = y[r];
    }
    if let Some(x) = elim {
        for (r, &i) in zero.iter().enumerate() {
            u[verts[i]] = -(0..pos.len()).map(|c| x[(r, c)] * y[c]).sum::<f64>();
        }
    }
    Some((lambda1, u))
}
