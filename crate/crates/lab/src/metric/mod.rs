//! Finite-graph model of geodesic metric spaces: distances, balls, curves,
//! Gromov products, thin-triangle and starlikeness estimators and the annular
//! quasiconvexity check.

mod annular;
mod curve;
mod graph;
mod hyperbolicity;

pub use annular::{annular_quasiconvexity_check, AnnularOutcome, AnnularPair};
pub use curve::Curve;
pub use graph::{DistanceMatrix, Edge, MetricGraph, TOL_GEOM_REL};
pub use hyperbolicity::{delta_hyperbolicity, roughly_starlike_m, DeltaOptions, HyperbolicityReport};

use crate::error::{input, LabError, Result};

/// Graph with a base point and the truncation frontier that stands in for
/// geodesic rays.
#[derive(Debug, Clone)]
pub struct PointedSpace {
    pub graph: MetricGraph,
    pub base: usize,
    pub ray_tips: Vec<usize>,
    /// True when every ray tip continues isometrically as a geodesic ray in the
    /// space being truncated, so analytic tails are exact.
    pub rays_certified: bool,
}

impl PointedSpace {
    pub fn new(graph: MetricGraph, base: usize, ray_tips: Vec<usize>, rays_certified: bool) -> Result<Self> {
        graph.check_vertex(base)?;
        for &t in &ray_tips {
            graph.check_vertex(t)?;
        }
        Ok(Self {
            graph,
            base,
            ray_tips,
            rays_certified,
        })
    }

    /// Distances to the base point.
    pub fn base_distances(&self) -> Vec<f64> {
        self.graph.sssp(self.base)
    }
}

pub fn shortest_dist(g: &MetricGraph, u: usize, v: usize) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(g.sssp(u)[v])
}

/// Gromov product `(x|y)` based at the space's base point.
pub fn gromov_product(ps: &PointedSpace, x: usize, y: usize) -> Result<f64> {
    ps.graph.check_vertex(x)?;
    ps.graph.check_vertex(y)?;
    let dz = ps.base_distances();
    let dxy = ps.graph.sssp(x)[y];
    Ok(gromov_product_from(dz[x], dz[y], dxy))
}

/// Gromov product from the three distances; clamped into its admissible range
/// to absorb rounding.
pub fn gromov_product_from(dxz: f64, dyz: f64, dxy: f64) -> f64 {
    (0.5 * (dxz + dyz - dxy)).clamp(0.0, dxz.min(dyz))
}

pub(crate) fn require_nonempty<T>(items: &[T], what: &str) -> Result<()> {
    if items.is_empty() {
        Err(LabError::Config(format!("{what} is empty")))
    } else {
        Ok(())
    }
}

pub(crate) fn positive(value: f64, name: &str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(input(format!("{name} must be positive and finite, got {value}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_tree_depth2() -> PointedSpace {
        // 0 root; 1,2 depth 1; 3,4 under 1; 5,6 under 2
        let e = |u, v| Edge { u, v, len: 1.0 };
        let g = MetricGraph::new(7, vec![e(0, 1), e(0, 2), e(1, 3), e(1, 4), e(2, 5), e(2, 6)]).unwrap();
        PointedSpace::new(g, 0, vec![3, 4, 5, 6], true).unwrap()
    }

    #[test]
    fn gromov_product_of_base_is_zero() {
        let ps = binary_tree_depth2();
        assert_eq!(gromov_product(&ps, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn siblings_meet_at_depth_one() {
        let ps = binary_tree_depth2();
        assert_eq!(gromov_product(&ps, 3, 4).unwrap(), 1.0);
        assert_eq!(gromov_product(&ps, 3, 5).unwrap(), 0.0);
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let ps = binary_tree_depth2();
        assert!(matches!(gromov_product(&ps, 0, 9), Err(LabError::UnknownVertex(9))));
        assert!(shortest_dist(&ps.graph, 9, 0).is_err());
    }
}
