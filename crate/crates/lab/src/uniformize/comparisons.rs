use rand::Rng;

use super::UniformizedSpace;
use crate::error::Result;
use crate::metric::gromov_product_from;
use crate::report::{Status, VerificationReport};
use crate::sampling;

/// Empirical constants of the comparability statements on a uniformized
/// space, over pairs sampled from `samples` sources:
/// `d_ε(x,y) ≃ e^{−ε(x|y)} min(1, εd(x,y))/ε`,
/// `e^{εd(x,y)} ≃ d_ε(x,y)²/(d_ε(x)d_ε(y))` when `εd(x,y) ≥ 1`, and
/// `ρ_β(y) ≃ ρ_β(x)` on subWhitney balls, whose ratio is asserted to stay
/// below `exp(β C₁C₀/(2ε))`.
pub fn comparability_report(us: &UniformizedSpace, m: f64, beta: f64, samples: usize, seed: u64) -> Result<VerificationReport> {
    let eps = us.eps;
    let consts = us.constants(m, 0.0, None);
    let bd = us.boundary_distances()?;
    let dz = &us.base_dist;
    let mut rng = sampling::rng(seed);
    let n = us.graph.len();
    let (mut g_lo, mut g_hi) = (f64::INFINITY, 0.0f64);
    let (mut c_lo, mut c_hi) = (f64::INFINITY, 0.0f64);
    let mut rho_max: f64 = 1.0;
    let whitney = consts.c1 / (2.0 * consts.c2);
    for _ in 0..samples {
        let x = rng.gen_range(0..n);
        let d = us.source.graph.sssp(x);
        let de = us.graph.sssp(x);
        for y in 0..n {
            if y == x {
                continue;
            }
            let gp = gromov_product_from(dz[x], dz[y], d[y]);
            let model = (-eps * gp).exp() * (eps * d[y]).min(1.0) / eps;
            let ratio = de[y] / model;
            g_lo = g_lo.min(ratio);
            g_hi = g_hi.max(ratio);
            if eps * d[y] >= 1.0 && bd[x] > 0.0 && bd[y] > 0.0 {
                let r = (eps * d[y]).exp() / (de[y] * de[y] / (bd[x] * bd[y]));
                c_lo = c_lo.min(r);
                c_hi = c_hi.max(r);
            }
            if de[y] < whitney * bd[x] {
                let r = (-beta * (dz[y] - dz[x])).exp();
                rho_max = rho_max.max(r.max(1.0 / r));
            }
        }
    }
    let rho_bound = (beta * consts.c1 * consts.c0 / (2.0 * eps)).exp();
    let gromov_c = g_hi.max(1.0 / g_lo);
    let status = if us.truncation_biased {
        Status::Inconclusive
    } else {
        Status::from_pass(gromov_c.is_finite() && rho_max <= rho_bound * (1.0 + 1e-12))
    };
    let mut r = VerificationReport::new("comparability", "uniformized-metric/gromov-product-comparison", status)
        .measure("gromovRatioMin", g_lo)
        .measure("gromovRatioMax", g_hi)
        .measure("gromovConstant", gromov_c)
        .measure("rhoBetaMaxRatio", rho_max)
        .predict("rhoBetaBound", rho_bound);
    if c_hi > 0.0 {
        r = r.measure("distanceProductMin", c_lo).measure("distanceProductMax", c_hi);
    } else {
        r = r.note("no sampled pair with εd ≥ 1");
    }
    Ok(r)
}
