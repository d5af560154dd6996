//! Shared graph JSON format.
//!
//! ```json
//! { "vertices": [{"id": 0, "mass": 0.5, "tags": ["rayTip"], "tail": "ray", "pos": [-2.0, 0.0]}],
//!   "edges": [{"u": 0, "v": 1, "len": 1.0}],
//!   "meta": {"basePoint": 2, "epsilon": 1.0, "generatorProvenance": {...}} }
//! ```
//!
//! `tail` is either the string `"ray"` (the vertex continues isometrically as a
//! geodesic ray, so analytic tail closures are exact) or a number (an explicit
//! closure length). Floats are written in shortest round-trip form, so writing
//! and reading reproduces every value bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::generators::{GeneratorSpec, MeasuredDomain, MeasuredSpace};
use crate::hyperbolize::UniformDomain;
use crate::measure::MeasureField;
use crate::metric::{Edge, MetricGraph, PointedSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    Ray,
    Length(f64),
}

impl Serialize for Tail {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tail::Ray => s.serialize_str("ray"),
            Tail::Length(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Tail {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            Num(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "ray" => Ok(Tail::Ray),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("tail must be \"ray\" or a number, got {w:?}"))),
            Raw::Num(x) if x >= 0.0 && x.is_finite() => Ok(Tail::Length(x)),
            Raw::Num(x) => Err(serde::de::Error::custom(format!("tail length {x} must be finite and nonnegative"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
enum Tag {
    Boundary,
    RayTip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<Tag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Tail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_provenance: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FileRecord {
    vertices: Vec<VertexRecord>,
    edges: Vec<Edge>,
    #[serde(default)]
    meta: Meta,
}

/// In-memory form of a graph file.
#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: MetricGraph,
    pub masses: Option<Vec<f64>>,
    pub boundary: Vec<usize>,
    pub ray_tips: Vec<usize>,
    pub tails: Vec<Option<Tail>>,
    pub meta: Meta,
}

fn data(msg: impl Into<String>) -> LabError {
    LabError::Data(msg.into())
}

impl GraphDocument {
    pub fn from_space(ms: &MeasuredSpace, spec: Option<&GeneratorSpec>) -> Self {
        let ps = &ms.space;
        let mut tails = vec![None; ps.graph.len()];
        if ps.rays_certified {
            for &t in &ps.ray_tips {
                tails[t] = Some(Tail::Ray);
            }
        }
        Self {
            graph: ps.graph.clone(),
            masses: Some(ms.measure.masses().to_vec()),
            boundary: Vec::new(),
            ray_tips: ps.ray_tips.clone(),
            tails,
            meta: Meta {
                base_point: Some(ps.base),
                generator_provenance: spec.map(provenance),
                ..Meta::default()
            },
        }
    }

    pub fn from_domain(md: &MeasuredDomain, spec: Option<&GeneratorSpec>) -> Self {
        let dom = &md.domain;
        Self {
            graph: dom.graph().clone(),
            masses: Some(md.measure.masses().to_vec()),
            boundary: dom.boundary(),
            ray_tips: Vec::new(),
            tails: vec![None; dom.len()],
            meta: Meta {
                uniformity_a: dom.uniformity(),
                generator_provenance: spec.map(provenance),
                ..Meta::default()
            },
        }
    }

    pub fn measure(&self) -> Result<MeasureField> {
        match &self.masses {
            Some(m) => MeasureField::new(m.clone()),
            None => Err(data("vertices[].mass is missing")),
        }
    }

    pub fn pointed_space(&self) -> Result<PointedSpace> {
        let base = self.meta.base_point.ok_or_else(|| data("meta.basePoint is missing"))?;
        let certified = !self.ray_tips.is_empty() && self.ray_tips.iter().all(|&t| self.tails[t] == Some(Tail::Ray));
        PointedSpace::new(self.graph.clone(), base, self.ray_tips.clone(), certified)
    }

    pub fn domain(&self) -> Result<UniformDomain> {
        let dom = UniformDomain::new(self.graph.clone(), &self.boundary)?;
        Ok(match self.meta.uniformity_a {
            Some(a) => dom.with_uniformity(a),
            None => dom,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let n = self.graph.len();
        let pos = self.graph.positions();
        let vertices = (0..n)
            .map(|v| {
                let mut tags = Vec::new();
                if self.boundary.contains(&v) {
                    tags.push(Tag::Boundary);
                }
                if self.ray_tips.contains(&v) {
                    tags.push(Tag::RayTip);
                }
                VertexRecord {
                    id: v,
                    mass: self.masses.as_ref().map(|m| m[v]),
                    tags,
                    tail: self.tails[v],
                    pos: pos.get(v).copied(),
                }
            })
            .collect();
        let rec = FileRecord {
            vertices,
            edges: self.graph.edges().to_vec(),
            meta: self.meta.clone(),
        };
        let mut s = serde_json::to_string_pretty(&rec)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: FileRecord = serde_json::from_str(text)?;
        let n = rec.vertices.len();
        let mut seen = vec![false; n];
        let mut masses = vec![None; n];
        let mut tails = vec![None; n];
        let mut pos = vec![None; n];
        let mut boundary = Vec::new();
        let mut ray_tips = Vec::new();
        for (i, vr) in rec.vertices.iter().enumerate() {
            if vr.id >= n || seen[vr.id] {
                return Err(data(format!("vertices[{i}].id = {} is out of range or repeated", vr.id)));
            }
            seen[vr.id] = true;
            if let Some(m) = vr.mass {
                if !(m >= 0.0 && m.is_finite()) {
                    return Err(data(format!("vertices[{i}].mass = {m} must be finite and nonnegative")));
                }
            }
            masses[vr.id] = vr.mass;
            tails[vr.id] = vr.tail;
            pos[vr.id] = vr.pos;
            if vr.tags.contains(&Tag::Boundary) {
                boundary.push(vr.id);
            }
            if vr.tags.contains(&Tag::RayTip) {
                ray_tips.push(vr.id);
            }
        }
        boundary.sort_unstable();
        ray_tips.sort_unstable();
        for (i, e) in rec.edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(data(format!("edges[{i}] references an unknown vertex")));
            }
            if !(e.len > 0.0 && e.len.is_finite()) {
                return Err(data(format!("edges[{i}].len = {} must be positive", e.len)));
            }
        }
        let masses = if masses.iter().all(Option::is_some) {
            Some(masses.into_iter().flatten().collect())
        } else if masses.iter().all(Option::is_none) {
            None
        } else {
            return Err(data("vertices[].mass must be given for all vertices or none"));
        };
        let pos = if pos.iter().all(Option::is_some) {
            pos.into_iter().flatten().collect()
        } else {
            Vec::new()
        };
        let graph = MetricGraph::new(n, rec.edges)
            .map_err(|e| data(format!("edges: {e}")))?
            .with_positions(pos)?;
        if let Some(b) = rec.meta.base_point {
            if b >= n {
                return Err(data(format!("meta.basePoint = {b} is not a vertex")));
            }
        }
        Ok(Self {
            graph,
            masses,
            boundary,
            ray_tips,
            tails,
            meta: rec.meta,
        })
    }
}

fn provenance(spec: &GeneratorSpec) -> serde_json::Value {
    serde_json::to_value(spec).expect("generator specs serialize")
}
