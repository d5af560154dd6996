use serde::Serialize;

use super::MetricGraph;
use crate::error::{input, Result};

/// Walk along graph edges with cumulative arc length. Vertices may repeat, so
/// loops and back-and-forth excursions are representable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    vertices: Vec<usize>,
    arclength: Vec<f64>,
}

impl Curve {
    /// Builds a curve from consecutive adjacent vertices, traversing the
    /// shortest edge between each pair.
    pub fn from_vertices(g: &MetricGraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(input("curve needs at least one vertex"));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let mut arclength = Vec::with_capacity(vertices.len());
        arclength.push(0.0);
        let mut acc = 0.0;
        for w in vertices.windows(2) {
            let e = g
                .edge_between(w[0], w[1])
                .ok_or_else(|| input(format!("curve steps between non-adjacent vertices {} and {}", w[0], w[1])))?;
            acc += g.edge(e).len;
            arclength.push(acc);
        }
        Ok(Self { vertices, arclength })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn arclength(&self) -> &[f64] {
        &self.arclength
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("curves are nonempty")
    }

    pub fn length(&self) -> f64 {
        *self.arclength.last().expect("curves are nonempty")
    }

    pub fn reversed(&self, g: &MetricGraph) -> Self {
        let mut vs = self.vertices.clone();
        vs.reverse();
        Self::from_vertices(g, vs).expect("reversal of a valid curve is valid")
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, g: &MetricGraph, other: &Curve) -> Result<Self> {
        if self.end() != other.start() {
            return Err(input("concatenated curves do not share an endpoint"));
        }
        let mut vs = self.vertices.clone();
        vs.extend_from_slice(&other.vertices[1..]);
        Self::from_vertices(g, vs)
    }

    /// Initial piece ending at the vertex whose arc length is closest to
    /// `target` (ties toward the shorter piece).
    pub fn prefix_near(&self, g: &MetricGraph, target: f64) -> Self {
        let i = self.index_near(target);
        Self::from_vertices(g, self.vertices[..=i].to_vec()).expect("prefix of a valid curve is valid")
    }

    /// Index of the vertex whose arc length is closest to `target`.
    pub fn index_near(&self, target: f64) -> usize {
        let mut best = 0;
        for (i, &s) in self.arclength.iter().enumerate() {
            if (s - target).abs() < (self.arclength[best] - target).abs() {
                best = i;
            }
        }
        best
    }
}
