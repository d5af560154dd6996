use serde::Serialize;

use super::{product_domain, ProductDomain};
use crate::error::{input, Result};
use crate::hyperbolize::{quasihyperbolic, QuasihyperbolicSpace};
use crate::metric::{delta_hyperbolicity, DeltaOptions, HyperbolicityReport, PointedSpace};
use crate::report::{Status, VerificationReport};
use crate::sampling;
use crate::uniformize::{uniformize, UniformizedSpace};

/// `(X_ε × Y_ε, k)`: the quasihyperbolic metric on the product of the
/// uniformized factors.
#[derive(Debug, Clone)]
pub struct IndirectProduct {
    pub eps: f64,
    pub x: UniformizedSpace,
    pub y: UniformizedSpace,
    pub product: ProductDomain,
    pub qh: QuasihyperbolicSpace,
    /// Hyperbolic space on the interior of the product, based at `(z_X, z_Y)`.
    pub space: PointedSpace,
    pub delta: Option<HyperbolicityReport>,
}

impl IndirectProduct {
    /// Product vertex id of `(x, y)` for source vertices of the factors.
    pub fn vertex(&self, x: usize, y: usize) -> usize {
        self.product.id(x, y)
    }

    pub fn k(&self, a: usize, b: usize) -> Result<f64> {
        self.qh.k(a, b)
    }
}

/// Uniformizes both factors, closes them off with their ideal boundary
/// vertices, forms the product domain and hyperbolizes it. The δ estimate is
/// computed when options are given.
pub fn indirect_product(xs: &PointedSpace, ys: &PointedSpace, eps: f64, delta: Option<DeltaOptions>) -> Result<IndirectProduct> {
    let x = uniformize(xs, eps)?;
    let y = uniformize(ys, eps)?;
    let cx = x.closure()?;
    let cy = y.closure()?;
    let product = product_domain(&cx.domain, &cy.domain)?;
    let qh = quasihyperbolic(&product.domain)?;
    let base = qh.interior_index(product.id(xs.base, ys.base))?;
    let space = PointedSpace::new(qh.graph.clone(), base, Vec::new(), false)?;
    let delta = delta.map(|opts| delta_hyperbolicity(&space.graph, opts)).transpose()?;
    Ok(IndirectProduct {
        eps,
        x,
        y,
        product,
        qh,
        space,
        delta,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LipschitzReport {
    pub eps: f64,
    /// Largest `d_X(πa, πb) / k(a, b)`.
    pub sup_ratio: f64,
    /// `ε · sup_ratio`, expected to depend only on the factors' geometry.
    pub scaled: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pairs: usize,
}

impl LipschitzReport {
    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("projection-lipschitz", "indirect-product/projection", Status::from_pass(self.sup_ratio.is_finite()))
            .measure("supRatio", self.sup_ratio)
            .measure("epsSupRatio", self.scaled)
            .measure("pairs", self.pairs as f64)
            .predict("eps", self.eps);
        if let Some((a, b)) = self.worst_pair {
            r = r.witness("worstPair", vec![a, b], vec![self.sup_ratio]);
        }
        r
    }
}

/// Sup of `d_X(πa, πb) / k(a, b)` over pairs from `samples` sampled sources
/// to every interior vertex of the product.
pub fn projection_lipschitz_check(ip: &IndirectProduct, samples: usize, seed: u64) -> Result<LipschitzReport> {
    let interior = &ip.qh.to_source;
    if interior.len() < 2 {
        return Err(input("indirect product has fewer than two interior vertices"));
    }
    let gx = &ip.x.source.graph;
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; gx.len()];
    let mut out = LipschitzReport {
        eps: ip.eps,
        sup_ratio: 0.0,
        scaled: 0.0,
        worst_pair: None,
        pairs: 0,
    };
    for i in sampling::distinct_indices(interior.len(), samples, seed) {
        let a = interior[i];
        let k = ip.qh.k_row(a)?;
        let xa = ip.product.coords(a).0;
        let dx = rows[xa].get_or_insert_with(|| gx.sssp(xa));
        for &b in interior {
            if b == a {
                continue;
            }
            let ratio = dx[ip.product.coords(b).0] / k[b];
            out.pairs += 1;
            if ratio > out.sup_ratio {
                out.sup_ratio = ratio;
                out.worst_pair = Some((a, b));
            }
        }
    }
    out.scaled = ip.eps * out.sup_ratio;
    Ok(out)
}
