//! Sum-metric products of bounded uniform domains, long uniform curves,
//! indirect products `X ×_ε Y` and the Lipschitz behaviour of projections and
//! canonical maps.

mod banana;
mod canonical;
mod indirect;

pub use banana::{long_banana_curve, BananaBuilder, BananaCertificate, BananaCurve};
pub use canonical::{canonical_map_distortion, refine_near_base, CanonicalOptions, CanonicalOutcome, PhiWitness, PsiWitness};
pub use indirect::{indirect_product, projection_lipschitz_check, IndirectProduct, LipschitzReport};

pub use crate::hyperbolize::uniform_curve_check;

use serde::Serialize;

use crate::error::{input, Result};
use crate::hyperbolize::{uniformity_constant, UniformDomain};
use crate::metric::{Curve, Edge, MetricGraph};
use crate::report::{Status, VerificationReport};
use crate::sampling;

/// Uniformity constants of the factors and the constant predicted for the
/// product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductConstants {
    pub a1: f64,
    pub a2: f64,
    /// `80[(A+1)D + (A'+1)D'] / min(D/A³, D'/A'³)`.
    pub a_tilde: f64,
}

impl ProductConstants {
    pub fn new(a1: f64, d1: f64, a2: f64, d2: f64) -> Self {
        let num = 80.0 * ((a1 + 1.0) * d1 + (a2 + 1.0) * d2);
        let den = (d1 / a1.powi(3)).min(d2 / a2.powi(3));
        Self { a1, a2, a_tilde: num / den }
    }
}

/// Product of two domain graphs under the sum metric. Vertex `(i, j)` has id
/// `i·n2 + j`; a pair is a boundary vertex when either coordinate is.
#[derive(Debug, Clone)]
pub struct ProductDomain {
    pub domain: UniformDomain,
    pub n1: usize,
    pub n2: usize,
    /// Factor diameters.
    pub d1: f64,
    pub d2: f64,
    pub constants: Option<ProductConstants>,
}

impl ProductDomain {
    pub fn id(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.n2, v % self.n2)
    }
}

/// Cartesian-move product graph: each edge changes one coordinate and keeps
/// its factor length, so shortest paths realize the sum metric exactly.
pub fn product_graph(g1: &MetricGraph, g2: &MetricGraph) -> Result<MetricGraph> {
    let (n1, n2) = (g1.len(), g2.len());
    let mut edges = Vec::with_capacity(g1.edges().len() * n2 + g2.edges().len() * n1);
    for e in g1.edges() {
        edges.extend((0..n2).map(|j| Edge {
            u: e.u * n2 + j,
            v: e.v * n2 + j,
            len: e.len,
        }));
    }
    for e in g2.edges() {
        edges.extend((0..n1).map(|i| Edge {
            u: i * n2 + e.u,
            v: i * n2 + e.v,
            len: e.len,
        }));
    }
    let g = MetricGraph::new(n1 * n2, edges)?;
    // one-dimensional factors embed as a planar grid
    let flat = |g: &MetricGraph| g.positions().len() == g.len() && g.positions().iter().all(|p| p[1] == 0.0);
    if flat(g1) && flat(g2) {
        let pos = (0..n1 * n2)
            .map(|v| [g1.positions()[v / n2][0], g2.positions()[v % n2][0]])
            .collect();
        g.with_positions(pos)
    } else {
        Ok(g)
    }
}

/// Product domain without uniformity constants.
pub fn product_domain(dom1: &UniformDomain, dom2: &UniformDomain) -> Result<ProductDomain> {
    let d1 = dom1.graph().diameter();
    let d2 = dom2.graph().diameter();
    if !(d1.is_finite() && d2.is_finite()) {
        return Err(input("product factors must be bounded"));
    }
    let g = product_graph(dom1.graph(), dom2.graph())?;
    let n2 = dom2.len();
    let boundary: Vec<usize> = (0..g.len())
        .filter(|&v| dom1.is_boundary(v / n2) || dom2.is_boundary(v % n2))
        .collect();
    Ok(ProductDomain {
        domain: UniformDomain::new(g, &boundary)?,
        n1: dom1.len(),
        n2,
        d1,
        d2,
        constants: None,
    })
}

/// Product domain with factor constants (declared, else measured on
/// `pairs` sampled pairs) and the predicted product constant.
pub fn product_uniform(dom1: &UniformDomain, dom2: &UniformDomain, pairs: usize, seed: u64) -> Result<ProductDomain> {
    let mut pd = product_domain(dom1, dom2)?;
    let a1 = uniformity_constant(dom1, pairs, seed)?;
    let a2 = uniformity_constant(dom2, pairs, seed.wrapping_add(1))?;
    pd.constants = Some(ProductConstants::new(a1, pd.d1, a2, pd.d2));
    Ok(pd)
}

/// Interleaves two factor curves into a product curve, moving one coordinate
/// at a time in order of normalized arc length.
pub fn product_curve(pd: &ProductDomain, c1: &Curve, c2: &Curve) -> Result<Curve> {
    let (v1, v2) = (c1.vertices(), c2.vertices());
    let s1 = |i: usize| c1.arclength()[i] / c1.length();
    let s2 = |j: usize| c2.arclength()[j] / c2.length();
    let (mut i, mut j) = (0, 0);
    let mut out = vec![pd.id(v1[0], v2[0])];
    while i + 1 < v1.len() || j + 1 < v2.len() {
        let take_first = j + 1 >= v2.len() || (i + 1 < v1.len() && s1(i + 1) <= s2(j + 1));
        if take_first {
            i += 1;
        } else {
            j += 1;
        }
        out.push(pd.id(v1[i], v2[j]));
    }
    Curve::from_vertices(pd.domain.graph(), out)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductUniformity {
    pub constants: ProductConstants,
    /// Largest minimal constant among the product curves.
    pub worst_a: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pairs: usize,
    /// Factor long curves whose own certificate failed.
    pub banana_failures: usize,
    /// Product curves not uniform with the predicted constant.
    pub product_failures: usize,
}

impl ProductUniformity {
    pub fn pass(&self) -> bool {
        self.banana_failures == 0 && self.product_failures == 0
    }

    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("product-uniformity", "uniform-product/predicted-constant", Status::from_pass(self.pass()))
            .measure("worstA", self.worst_a)
            .measure("pairs", self.pairs as f64)
            .measure("bananaFailures", self.banana_failures as f64)
            .measure("productFailures", self.product_failures as f64)
            .predict("A", self.constants.a1)
            .predict("A2", self.constants.a2)
            .predict("ATilde", self.constants.a_tilde);
        if let Some((a, b)) = self.worst_pair {
            r = r.witness("worstPair", vec![a, b], vec![self.worst_a]);
        }
        r
    }
}

/// For sampled interior pairs of the product, joins the coordinates by long
/// uniform curves of lengths `ΛD`, `ΛD'` with `Λ = max(d/D, d'/D')`, merges
/// them and checks the result against the predicted constant.
pub fn product_uniformity_check(
    pd: &ProductDomain,
    dom1: &UniformDomain,
    dom2: &UniformDomain,
    pairs: usize,
    seed: u64,
) -> Result<ProductUniformity> {
    let constants = pd
        .constants
        .ok_or_else(|| input("product constants are missing; build with product_uniform"))?;
    let b1 = BananaBuilder::new(dom1, constants.a1)?;
    let b2 = BananaBuilder::new(dom2, constants.a2)?;
    let interior = pd.domain.interior();
    let mut out = ProductUniformity {
        constants,
        worst_a: 1.0,
        worst_pair: None,
        pairs: 0,
        banana_failures: 0,
        product_failures: 0,
    };
    for (a, b) in sampling::distinct_pairs(interior.len(), pairs, seed) {
        let (p, q) = (interior[a], interior[b]);
        let ((x1, x2), (y1, y2)) = (pd.coords(p), pd.coords(q));
        let d1 = dom1.graph().sssp(x1)[y1];
        let d2 = dom2.graph().sssp(x2)[y2];
        let lambda = (d1 / pd.d1).max(d2 / pd.d2);
        let c1 = b1.build(x1, y1, (lambda * pd.d1).max(d1))?;
        let c2 = b2.build(x2, y2, (lambda * pd.d2).max(d2))?;
        out.banana_failures += usize::from(!c1.certificate.holds) + usize::from(!c2.certificate.holds);
        let curve = product_curve(pd, &c1.curve, &c2.curve)?;
        let check = uniform_curve_check(&pd.domain, &curve, constants.a_tilde);
        if !check.pass {
            out.product_failures += 1;
        }
        if check.minimal_a > out.worst_a || out.worst_pair.is_none() {
            out.worst_a = out.worst_a.max(check.minimal_a);
            out.worst_pair = Some((p, q));
        }
        out.pairs += 1;
    }
    Ok(out)
}
