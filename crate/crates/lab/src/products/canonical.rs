use serde::Serialize;

use super::product_domain;
use crate::error::{input, Result};
use crate::hyperbolize::{quasihyperbolic, QuasihyperbolicSpace};
use crate::metric::{Edge, MetricGraph, PointedSpace};
use crate::report::{Status, Table, VerificationReport};
use crate::sampling;
use crate::uniformize::{uniformize, UniformizedSpace};

#[derive(Debug, Clone, Copy)]
pub struct CanonicalOptions {
    /// Sampled sources for the forward sups.
    pub samples: usize,
    pub seed: u64,
    /// Spacing of the witness distances from the base point.
    pub spacing: f64,
    /// Constant `C(δ)` in the offsets of the mixed witnesses.
    pub c_delta: f64,
    /// Starlikeness constant `M` used for `C₁`, `C₂`.
    pub m: f64,
}

impl Default for CanonicalOptions {
    fn default() -> Self {
        Self {
            samples: 6,
            seed: 0,
            spacing: 1.0,
            c_delta: 1.0,
            m: 0.0,
        }
    }
}

/// Adjacent pair `(x, z_Y)`, `(x', z_Y)` on a geodesic ray of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiWitness {
    pub x: usize,
    pub x_next: usize,
    /// `d(·, z_X)` at the midpoint of the pair.
    pub distance: f64,
    /// `d̃_{ε'} / d̃_ε`.
    pub ratio: f64,
    /// `e^{(ε−ε') distance}`.
    pub closed_form: f64,
}

/// Pair `(x, z_Y)`, `(x, y)` with `d(z_Y, y)` proportional to `d_ε(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PhiWitness {
    pub x: usize,
    pub y: usize,
    pub offset: f64,
    /// `k_ε / k_{ε'}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonicalOutcome {
    pub eps: f64,
    pub eps_prime: f64,
    /// Sampled sup of `(ε/ε') k_{ε'} / k_ε`.
    pub phi_constant: f64,
    /// Sampled sup of `d̃_ε / d̃_{ε'}`.
    pub psi_constant: f64,
    pub psi_inverse: Vec<PsiWitness>,
    pub phi_inverse: Vec<PhiWitness>,
    pub psi_growth: f64,
    pub psi_closed_growth: f64,
    /// `|measured growth / closed-form growth − 1|`.
    pub psi_growth_err: f64,
    pub phi_growth: f64,
    pub psi_monotone: bool,
    pub phi_monotone: bool,
    pub status: Status,
}

impl CanonicalOutcome {
    pub fn report(&self) -> VerificationReport {
        let mut psi = Table::new("psiInverseWitnesses", &["x", "xNext", "distance", "ratio", "closedForm"]);
        for w in &self.psi_inverse {
            psi.push(&[w.x as f64, w.x_next as f64, w.distance, w.ratio, w.closed_form]);
        }
        let mut phi = Table::new("phiInverseWitnesses", &["x", "y", "offset", "ratio"]);
        for w in &self.phi_inverse {
            phi.push(&[w.x as f64, w.y as f64, w.offset, w.ratio]);
        }
        let mut r = VerificationReport::new("canonical", "indirect-product/canonical-maps", self.status)
            .measure("phiConstant", self.phi_constant)
            .measure("psiConstant", self.psi_constant)
            .measure("psiGrowth", self.psi_growth)
            .measure("psiGrowthErr", self.psi_growth_err)
            .measure("phiGrowth", self.phi_growth)
            .predict("psiClosedGrowth", self.psi_closed_growth)
            .predict("minGrowth", 4.0)
            .predict("epsRatio", self.eps_prime / self.eps)
            .table(psi)
            .table(phi);
        if self.eps == self.eps_prime {
            r = r.note("equal parameters: both canonical maps are the identity");
        }
        r
    }
}

/// Subdivides the first edge of the canonical geodesic from the base point to
/// the first ray tip at the given distances from the base. Returns the new
/// space and the vertex created for each offset.
pub fn refine_near_base(ps: &PointedSpace, offsets: &[f64]) -> Result<(PointedSpace, Vec<usize>)> {
    let tip = *ps.ray_tips.first().ok_or_else(|| input("space has no ray tip"))?;
    let g = &ps.graph;
    let path = g.canonical_path_to(ps.base, tip, &g.sssp(tip));
    if path.len() < 2 {
        return Err(input("ray tip coincides with the base point"));
    }
    let (z, w) = (path[0], path[1]);
    let ei = g.edge_between(z, w).expect("geodesic steps along edges");
    let len = g.edge(ei).len;
    if let Some(s) = offsets.iter().find(|&&s| !(s > 0.0 && s < len)) {
        return Err(input(format!("offset {s} is outside the first edge (0, {len})")));
    }
    let mut cuts = offsets.to_vec();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let n = g.len();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ei)
        .map(|(_, e)| *e)
        .collect();
    let (mut prev, mut prev_s) = (z, 0.0);
    for (k, &s) in cuts.iter().enumerate() {
        edges.push(Edge { u: prev, v: n + k, len: s - prev_s });
        (prev, prev_s) = (n + k, s);
    }
    edges.push(Edge { u: prev, v: w, len: len - prev_s });
    let mut pos = g.positions().to_vec();
    if let (Some(pz), Some(pw)) = (g.position(z), g.position(w)) {
        pos.extend(cuts.iter().map(|&s| {
            let t = s / len;
            [pz[0] + t * (pw[0] - pz[0]), pz[1] + t * (pw[1] - pz[1])]
        }));
    }
    let refined = MetricGraph::new(n + cuts.len(), edges)?.with_positions(pos)?;
    let ids = offsets
        .iter()
        .map(|s| n + cuts.binary_search_by(|c| c.total_cmp(s)).expect("offset is a cut"))
        .collect();
    Ok((PointedSpace::new(refined, ps.base, ps.ray_tips.clone(), ps.rays_certified)?, ids))
}

struct Side {
    x: UniformizedSpace,
    y: UniformizedSpace,
    n2: usize,
    qh: QuasihyperbolicSpace,
}

fn side(xs: &PointedSpace, ys: &PointedSpace, eps: f64) -> Result<Side> {
    let x = uniformize(xs, eps)?;
    let y = uniformize(ys, eps)?;
    let pd = product_domain(&x.closure()?.domain, &y.closure()?.domain)?;
    let qh = quasihyperbolic(&pd.domain)?;
    Ok(Side { x, y, n2: pd.n2, qh })
}

fn growth(first: f64, last: f64) -> f64 {
    last / first
}

fn monotone(values: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = values.collect();
    v.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9))
}

/// Compares the indirect products `X ×_ε Y` and `X ×_{ε'} Y` through the
/// identity maps: forward distortion sups on sampled pairs and inverse ratios
/// along two witness families that move away from the base point.
pub fn canonical_map_distortion(
    xs: &PointedSpace,
    ys: &PointedSpace,
    eps: f64,
    eps_prime: f64,
    opts: &CanonicalOptions,
) -> Result<CanonicalOutcome> {
    if !(eps_prime > 0.0 && eps_prime <= eps) {
        return Err(input(format!("need 0 < ε' ≤ ε, got ε = {eps}, ε' = {eps_prime}")));
    }
    if !(opts.spacing > 0.0 && opts.c_delta >= 1.0) {
        return Err(input("witness spacing must be positive and C(δ) at least 1"));
    }
    let tip = *xs.ray_tips.first().ok_or_else(|| input("X has no ray tip"))?;
    let gx = &xs.graph;
    let dz = xs.base_distances();
    let ray = gx.canonical_path_to(xs.base, tip, &gx.sssp(tip));
    let mut picks: Vec<usize> = Vec::new();
    for j in 0.. {
        let target = j as f64 * opts.spacing;
        match ray.iter().position(|&v| dz[v] >= target - gx.tol()) {
            Some(i) if i + 1 < ray.len() => {
                if picks.last() != Some(&i) {
                    picks.push(i);
                }
            }
            _ => break,
        }
    }

    let xe = uniformize(xs, eps)?;
    let xp = uniformize(xs, eps_prime)?;
    let psi_inverse: Vec<PsiWitness> = picks
        .iter()
        .map(|&i| {
            let (a, b) = (ray[i], ray[i + 1]);
            let distance = 0.5 * (dz[a] + dz[b]);
            PsiWitness {
                x: a,
                x_next: b,
                distance,
                ratio: xp.graph.sssp(a)[b] / xe.graph.sssp(a)[b],
                closed_form: ((eps - eps_prime) * distance).exp(),
            }
        })
        .collect();

    let c = xe.constants(opts.m, 0.0, None);
    let bd = xe.boundary_distances()?;
    let offsets: Vec<f64> = picks.iter().map(|&i| c.c1 * bd[ray[i]] / (4.0 * c.c2 * opts.c_delta)).collect();
    let (ys_refined, ids) = refine_near_base(ys, &offsets)?;
    let se = side(xs, &ys_refined, eps)?;
    let sp = side(xs, &ys_refined, eps_prime)?;
    let pid = |x: usize, y: usize| x * se.n2 + y;

    let mut phi_inverse = Vec::with_capacity(picks.len());
    for ((&i, &y), &offset) in picks.iter().zip(&ids).zip(&offsets) {
        let x = ray[i];
        let (a, b) = (pid(x, ys.base), pid(x, y));
        phi_inverse.push(PhiWitness {
            x,
            y,
            offset,
            ratio: se.qh.k_row(a)?[b] / sp.qh.k_row(a)?[b],
        });
    }

    let interior = &se.qh.to_source;
    let mut phi_constant: f64 = 0.0;
    let mut psi_constant: f64 = 0.0;
    for s in sampling::distinct_indices(interior.len(), opts.samples, opts.seed) {
        let a = interior[s];
        let (ke, kp) = (se.qh.k_row(a)?, sp.qh.k_row(a)?);
        let (ia, ja) = (a / se.n2, a % se.n2);
        let (dxe, dye) = (se.x.graph.sssp(ia), se.y.graph.sssp(ja));
        let (dxp, dyp) = (sp.x.graph.sssp(ia), sp.y.graph.sssp(ja));
        for &b in interior {
            if b == a {
                continue;
            }
            phi_constant = phi_constant.max((eps / eps_prime) * kp[b] / ke[b]);
            let (ib, jb) = (b / se.n2, b % se.n2);
            psi_constant = psi_constant.max((dxe[ib] + dye[jb]) / (dxp[ib] + dyp[jb]));
        }
    }

    let (psi_growth, psi_closed_growth, phi_growth) = match (psi_inverse.first(), psi_inverse.last()) {
        (Some(f), Some(l)) => (
            growth(f.ratio, l.ratio),
            growth(f.closed_form, l.closed_form),
            growth(phi_inverse[0].ratio, phi_inverse[phi_inverse.len() - 1].ratio),
        ),
        _ => (1.0, 1.0, 1.0),
    };
    let psi_growth_err = (psi_growth / psi_closed_growth - 1.0).abs();
    let psi_monotone = monotone(psi_inverse.iter().map(|w| w.ratio));
    let phi_monotone = monotone(phi_inverse.iter().map(|w| w.ratio));
    let status = if eps == eps_prime || psi_inverse.len() < 2 {
        Status::Inconclusive
    } else {
        Status::from_pass(psi_growth >= 4.0 && phi_growth >= 4.0 && psi_growth_err <= 0.05 && psi_monotone && phi_monotone)
    };
    Ok(CanonicalOutcome {
        eps,
        eps_prime,
        phi_constant,
        psi_constant,
        psi_inverse,
        phi_inverse,
        psi_growth,
        psi_closed_growth,
        psi_growth_err,
        phi_growth,
        psi_monotone,
        phi_monotone,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_line, Weight};

    #[test]
    fn refinement_preserves_distances() {
        let ps = gen_line(2.0, 0.5, &Weight::Const(1.0)).unwrap().space;
        let (r, ids) = refine_near_base(&ps, &[0.1, 0.3, 0.1]).unwrap();
        assert_eq!(r.graph.len(), ps.graph.len() + 2);
        assert_eq!(ids[0], ids[2]);
        let d = r.base_distances();
        assert!((d[ids[0]] - 0.1).abs() < 1e-15 && (d[ids[1]] - 0.3).abs() < 1e-15);
        let old = ps.base_distances();
        for v in 0..ps.graph.len() {
            assert!((d[v] - old[v]).abs() < 1e-12);
        }
        assert!(refine_near_base(&ps, &[0.5]).is_err());
    }

    #[test]
    fn equal_parameters_give_unit_ratios() {
        let ps = gen_line(3.0, 0.5, &Weight::Const(1.0)).unwrap().space;
        let o = canonical_map_distortion(&ps, &ps, 1.0, 1.0, &CanonicalOptions { samples: 2, ..Default::default() }).unwrap();
        assert_eq!(o.status, Status::Inconclusive);
        assert!(o.psi_inverse.iter().all(|w| w.ratio == 1.0));
        assert!(o.phi_inverse.iter().all(|w| w.ratio == 1.0));
        assert!((o.phi_constant - 1.0).abs() < 1e-12 && (o.psi_constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_ratios_grow_on_short_lines() {
        let ps = gen_line(6.0, 0.25, &Weight::Const(1.0)).unwrap().space;
        let o = canonical_map_distortion(&ps, &ps, 1.0, 0.5, &CanonicalOptions { samples: 2, ..Default::default() }).unwrap();
        assert!(o.psi_monotone && o.phi_monotone, "{o:?}");
        assert!(o.psi_growth > 4.0 && o.phi_growth > 4.0, "{o:?}");
        assert!(o.psi_growth_err < 0.05, "{o:?}");
        assert!(o.psi_constant <= 1.0 + 1e-12);
    }
}
