use crate::error::{input, Result};
use crate::metric::MetricGraph;

/// Graph with a tagged boundary vertex set and the per-vertex distance to it.
#[derive(Debug, Clone)]
pub struct UniformDomain {
    graph: MetricGraph,
    boundary: Vec<bool>,
    d_omega: Vec<f64>,
    uniformity: Option<f64>,
}

impl UniformDomain {
    pub fn new(graph: MetricGraph, boundary: &[usize]) -> Result<Self> {
        if boundary.is_empty() {
            return Err(input("domain needs at least one boundary vertex"));
        }
        let mut flags = vec![false; graph.len()];
        for &b in boundary {
            graph.check_vertex(b)?;
            flags[b] = true;
        }
        if flags.iter().all(|&b| b) {
            return Err(input("domain has no interior vertex"));
        }
        let sources: Vec<(usize, f64)> = boundary.iter().map(|&b| (b, 0.0)).collect();
        let d_omega = graph.multi_source(&sources);
        Ok(Self {
            graph,
            boundary: flags,
            d_omega,
            uniformity: None,
        })
    }

    /// Declared uniformity constant; takes precedence over measurement.
    pub fn with_uniformity(mut self, a: f64) -> Self {
        self.uniformity = Some(a);
        self
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.boundary[v]).collect()
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.boundary[v]).collect()
    }

    pub fn d_omega(&self) -> &[f64] {
        &self.d_omega
    }

    pub fn uniformity(&self) -> Option<f64> {
        self.uniformity
    }

    /// Largest boundary distance, attained at some vertex.
    pub fn max_d_omega(&self) -> (usize, f64) {
        self.d_omega
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (v, d)| if d > best.1 { (v, d) } else { best })
    }
}
