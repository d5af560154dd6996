//! Example spaces as graphs with mesh parameter `h`: the real line, the
//! interval, regular trees, the weighted strip, the two-ray prong, and planar
//! domains (square, slit square, polar disk).
//!
//! Masses of one-dimensional and grid generators are exact integrals of the
//! weight over each vertex's dual cell (half cells at the ends). Tree and
//! prong masses use the half-edge rule `w(v)·S(v)/2`, where `S(v)` is the
//! total length of incident edges, i.e. Lebesgue measure on the edges.

mod weight;

use serde::{Deserialize, Serialize};

pub use weight::Weight;

use crate::error::{input, Result};
use crate::hyperbolize::UniformDomain;
use crate::measure::MeasureField;
use crate::metric::{Edge, MetricGraph, PointedSpace};

#[derive(Debug, Clone)]
pub struct MeasuredSpace {
    pub space: PointedSpace,
    pub measure: MeasureField,
}

#[derive(Debug, Clone)]
pub struct MeasuredDomain {
    pub domain: UniformDomain,
    pub measure: MeasureField,
}

#[derive(Debug, Clone)]
pub enum Generated {
    Space(MeasuredSpace),
    Domain(MeasuredDomain),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProngVariant {
    /// Upper ray weighted by `e^x`.
    Doubling,
    /// Unit weight everywhere.
    Pi,
}

/// Declarative description of a generated space; recorded as provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum GeneratorSpec {
    Line {
        t: f64,
        h: f64,
        #[serde(default)]
        weight: Weight,
    },
    Interval {
        h: f64,
    },
    #[serde(rename_all = "camelCase")]
    KaryTree {
        k: usize,
        d: usize,
        h: f64,
    },
    Strip {
        t: f64,
        h: f64,
        #[serde(default)]
        weight: Weight,
    },
    Prong {
        variant: ProngVariant,
        t: f64,
        h: f64,
    },
    DiskPolar {
        rings: usize,
        sectors: usize,
    },
    Square {
        h: f64,
    },
    SlitSquare {
        h: f64,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    Ok(match spec {
        GeneratorSpec::Line { t, h, weight } => Generated::Space(gen_line(*t, *h, weight)?),
        GeneratorSpec::Interval { h } => Generated::Domain(gen_interval(*h)?),
        GeneratorSpec::KaryTree { k, d, h } => Generated::Space(gen_kary_tree(*k, *d, *h)?),
        GeneratorSpec::Strip { t, h, weight } => Generated::Space(gen_strip(*t, *h, weight)?),
        GeneratorSpec::Prong { variant, t, h } => Generated::Space(gen_prong(*variant, *t, *h)?),
        GeneratorSpec::DiskPolar { rings, sectors } => Generated::Domain(gen_disk_polar(*rings, *sectors)?),
        GeneratorSpec::Square { h } => Generated::Domain(gen_square(*h)?),
        GeneratorSpec::SlitSquare { h } => Generated::Domain(gen_slit_square(*h)?),
    })
}

/// Number of mesh steps `total / h`, which must be a positive integer.
fn steps(total: f64, h: f64, what: &str) -> Result<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(input(format!("mesh h = {h} must be positive")));
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(input(format!("{what} = {total} must be positive")));
    }
    let n = (total / h).round();
    if n < 1.0 || (n * h - total).abs() > 1e-9 * total {
        return Err(input(format!("{what} = {total} is not a multiple of h = {h}")));
    }
    Ok(n as usize)
}

fn unit(a: usize, b: usize, len: f64) -> Edge {
    Edge { u: a, v: b, len }
}

/// Path graph on `{−T, …, T}` with spacing `h`, based at 0, tips at `±T`.
pub fn gen_line(t: f64, h: f64, w: &Weight) -> Result<MeasuredSpace> {
    let n = steps(t, h, "T")?;
    let xs: Vec<f64> = (0..=2 * n).map(|i| (i as f64 - n as f64) * h).collect();
    let edges = (0..2 * n).map(|i| unit(i, i + 1, h)).collect();
    let masses = xs
        .iter()
        .map(|&x| w.integral((x - h / 2.0).max(-t), (x + h / 2.0).min(t)))
        .collect();
    let pos = xs.iter().map(|&x| [x, 0.0]).collect();
    let g = MetricGraph::new(2 * n + 1, edges)?.with_positions(pos)?;
    Ok(MeasuredSpace {
        space: PointedSpace::new(g, n, vec![0, 2 * n], true)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Regular `K`-ary tree of depth `D` with unit edges subdivided into `1/h`
/// segments; vertex 0 is the root and the depth-`D` leaves are the ray tips.
pub fn gen_kary_tree(k: usize, d: usize, h: f64) -> Result<MeasuredSpace> {
    if k < 2 || d < 1 {
        return Err(input("need K ≥ 2 and D ≥ 1"));
    }
    let m = steps(1.0, h, "unit edge length")?;
    let seg = 1.0 / m as f64;
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next_id = 1;
    for _ in 0..d {
        let mut next = Vec::with_capacity(level.len() * k);
        for &parent in &level {
            for _ in 0..k {
                let mut prev = parent;
                for _ in 0..m {
                    edges.push(unit(prev, next_id, seg));
                    prev = next_id;
                    next_id += 1;
                }
                next.push(prev);
            }
        }
        level = next;
    }
    let g = MetricGraph::new(next_id, edges)?;
    let masses = (0..g.len()).map(|v| g.incident_length(v) / 2.0).collect();
    Ok(MeasuredSpace {
        space: PointedSpace::new(g, 0, level, true)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Grid on `[−T, T] × [−1, 1]` with spacing `h`, vertex `(i, j)` at
/// `(−T + ih, −1 + jh)` with id `i·(2/h + 1) + j`. Based at the origin with
/// tips at `(±T, 0)`; the weight acts on the first coordinate.
pub fn gen_strip(t: f64, h: f64, w: &Weight) -> Result<MeasuredSpace> {
    let nx = steps(2.0 * t, h, "2T")?;
    let ny = steps(2.0, h, "strip height")?;
    if ny % 2 != 0 || nx % 2 != 0 {
        return Err(input("the origin must be a grid vertex: T/h and 1/h must be integers"));
    }
    let id = |i: usize, j: usize| i * (ny + 1) + j;
    let mut edges = Vec::new();
    let mut masses = Vec::new();
    let mut pos = Vec::new();
    for i in 0..=nx {
        let x = i as f64 * h - t;
        let cell_x = w.integral((x - h / 2.0).max(-t), (x + h / 2.0).min(t));
        for j in 0..=ny {
            let y = j as f64 * h - 1.0;
            let cell_y = if j == 0 || j == ny { h / 2.0 } else { h };
            masses.push(cell_x * cell_y);
            pos.push([x, y]);
            if i < nx {
                edges.push(unit(id(i, j), id(i + 1, j), h));
            }
            if j < ny {
                edges.push(unit(id(i, j), id(i, j + 1), h));
            }
        }
    }
    let g = MetricGraph::new((nx + 1) * (ny + 1), edges)?.with_positions(pos)?;
    let mid = ny / 2;
    Ok(MeasuredSpace {
        space: PointedSpace::new(g, id(nx / 2, mid), vec![id(0, mid), id(nx, mid)], true)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Two rays `[0, T] × {0}` and `[0, T] × {1}` joined only by the rung
/// `{0} × [0, 1]`. Lower ray ids `0..=N`, upper ray `N+1..=2N+1`, rung
/// interior afterwards; based at the origin.
pub fn gen_prong(variant: ProngVariant, t: f64, h: f64) -> Result<MeasuredSpace> {
    let n = steps(t, h, "T")?;
    let lower = |i: usize| i;
    let upper = |i: usize| n + 1 + i;
    let mut edges = Vec::new();
    let mut pos = Vec::new();
    for i in 0..=n {
        pos.push([i as f64 * h, 0.0]);
    }
    for i in 0..=n {
        pos.push([i as f64 * h, 1.0]);
    }
    for i in 0..n {
        edges.push(unit(lower(i), lower(i + 1), h));
        edges.push(unit(upper(i), upper(i + 1), h));
    }
    let rung_steps = steps(1.0, h, "rung length").unwrap_or(1);
    let rung_len = 1.0 / rung_steps as f64;
    let mut prev = lower(0);
    for s in 1..rung_steps {
        let v = pos.len();
        pos.push([0.0, s as f64 * rung_len]);
        edges.push(unit(prev, v, rung_len));
        prev = v;
    }
    edges.push(unit(prev, upper(0), rung_len));
    let g = MetricGraph::new(pos.len(), edges)?.with_positions(pos)?;
    let masses = (0..g.len())
        .map(|v| {
            let [x, y] = g.positions()[v];
            let w = match variant {
                ProngVariant::Doubling if y == 1.0 => x.exp(),
                _ => 1.0,
            };
            w * g.incident_length(v) / 2.0
        })
        .collect();
    Ok(MeasuredSpace {
        space: PointedSpace::new(g, lower(0), vec![lower(n), upper(n)], true)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Path on `[−1, 1]` with spacing `h`; the endpoints are zero-mass boundary
/// vertices, interior masses are cell lengths.
pub fn gen_interval(h: f64) -> Result<MeasuredDomain> {
    let n = steps(2.0, h, "interval length")?;
    if n < 2 {
        return Err(input("interval mesh leaves no interior vertex"));
    }
    let edges = (0..n).map(|i| unit(i, i + 1, h)).collect();
    let pos = (0..=n).map(|i| [i as f64 * h - 1.0, 0.0]).collect();
    let masses = (0..=n).map(|i| if i == 0 || i == n { 0.0 } else { h }).collect();
    let g = MetricGraph::new(n + 1, edges)?.with_positions(pos)?;
    Ok(MeasuredDomain {
        domain: UniformDomain::new(g, &[0, n])?,
        measure: MeasureField::new(masses)?,
    })
}

/// Grid on `[−1, 1]²`, vertex `(i, j)` at `(−1 + ih, −1 + jh)` with id
/// `i·(2/h + 1) + j`; the outer ring is the boundary, interior cells carry
/// area `h²`.
pub fn gen_square(h: f64) -> Result<MeasuredDomain> {
    let n = steps(2.0, h, "square side")?;
    if n < 2 {
        return Err(input("square mesh leaves no interior vertex"));
    }
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let on_edge = |i: usize, j: usize| i == 0 || j == 0 || i == n || j == n;
    let mut edges = Vec::new();
    let mut pos = Vec::new();
    let mut masses = Vec::new();
    let mut boundary = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            pos.push([i as f64 * h - 1.0, j as f64 * h - 1.0]);
            if on_edge(i, j) {
                boundary.push(id(i, j));
                masses.push(0.0);
            } else {
                masses.push(h * h);
            }
            if i < n {
                edges.push(unit(id(i, j), id(i + 1, j), h));
            }
            if j < n {
                edges.push(unit(id(i, j), id(i, j + 1), h));
            }
        }
    }
    let g = MetricGraph::new((n + 1) * (n + 1), edges)?.with_positions(pos)?;
    Ok(MeasuredDomain {
        domain: UniformDomain::new(g, &boundary)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Square with the slit `{0} × [−1, 0]` removed. Slit points strictly
/// between the ends are doubled into a left and a right boundary copy, so
/// paths cannot cross the slit; the tip `(0, 0)` and the foot `(0, −1)` stay
/// single boundary vertices.
pub fn gen_slit_square(h: f64) -> Result<MeasuredDomain> {
    let n = steps(2.0, h, "square side")?;
    if n < 4 || n % 2 != 0 {
        return Err(input("slit square needs 1/h an integer ≥ 2"));
    }
    let mid = n / 2;
    let is_slit = |i: usize, j: usize| i == mid && j > 0 && j < mid;
    let mut grid_id = vec![usize::MAX; (n + 1) * (n + 1)];
    let mut pos = Vec::new();
    let mut masses = Vec::new();
    let mut boundary = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if is_slit(i, j) {
                continue;
            }
            let v = pos.len();
            grid_id[i * (n + 1) + j] = v;
            pos.push([i as f64 * h - 1.0, j as f64 * h - 1.0]);
            let b = i == 0 || j == 0 || i == n || j == n || (i == mid && j == mid);
            masses.push(if b { 0.0 } else { h * h });
            if b {
                boundary.push(v);
            }
        }
    }
    let mut side = [vec![usize::MAX; mid], vec![usize::MAX; mid]];
    for copies in &mut side {
        for j in 1..mid {
            copies[j] = pos.len();
            pos.push([0.0, j as f64 * h - 1.0]);
            masses.push(0.0);
            boundary.push(copies[j]);
        }
    }
    // the vertex standing for grid point (i, j) as seen from side s (0 left, 1 right)
    let at = |i: usize, j: usize, s: usize| if is_slit(i, j) { side[s][j] } else { grid_id[i * (n + 1) + j] };
    let mut edges = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i < n {
                // a horizontal step into the slit column lands on the left copy,
                // a step out of it starts from the right copy
                edges.push(unit(at(i, j, 1), at(i + 1, j, 0), h));
            }
            if j < n {
                if i == mid && (is_slit(i, j) || is_slit(i, j + 1)) {
                    edges.push(unit(at(i, j, 0), at(i, j + 1, 0), h));
                    edges.push(unit(at(i, j, 1), at(i, j + 1, 1), h));
                } else {
                    edges.push(unit(at(i, j, 0), at(i, j + 1, 0), h));
                }
            }
        }
    }
    let g = MetricGraph::new(pos.len(), edges)?.with_positions(pos)?;
    Ok(MeasuredDomain {
        domain: UniformDomain::new(g, &boundary)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Polar grid of the unit disk: center vertex 0, ring `k` at radius
/// `k/rings`, vertex `1 + (k−1)·sectors + j` at angle `2πj/sectors`. The
/// outer ring is the boundary; masses are areas of the polar cells.
pub fn gen_disk_polar(rings: usize, sectors: usize) -> Result<MeasuredDomain> {
    if rings < 2 || sectors < 3 {
        return Err(input("polar disk needs at least 2 rings and 3 sectors"));
    }
    let dr = 1.0 / rings as f64;
    let theta = 2.0 * std::f64::consts::PI / sectors as f64;
    let id = |k: usize, j: usize| 1 + (k - 1) * sectors + j;
    let mut pos = vec![[0.0, 0.0]];
    let mut masses = vec![std::f64::consts::PI * (dr / 2.0).powi(2)];
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for k in 1..=rings {
        let r = k as f64 * dr;
        let chord = 2.0 * r * (theta / 2.0).sin();
        for j in 0..sectors {
            let a = j as f64 * theta;
            pos.push([r * a.cos(), r * a.sin()]);
            if k == rings {
                masses.push(0.0);
                boundary.push(id(k, j));
            } else {
                masses.push(theta * r * dr);
            }
            let inner = if k == 1 { 0 } else { id(k - 1, j) };
            edges.push(unit(inner, id(k, j), dr));
            edges.push(unit(id(k, j), id(k, (j + 1) % sectors), chord));
        }
    }
    let g = MetricGraph::new(pos.len(), edges)?.with_positions(pos)?;
    Ok(MeasuredDomain {
        domain: UniformDomain::new(g, &boundary)?,
        measure: MeasureField::new(masses)?,
    })
}

/// Vertex at a given position, if any (within `1e−9`).
pub fn vertex_at(g: &MetricGraph, p: [f64; 2]) -> Option<usize> {
    g.positions()
        .iter()
        .position(|q| (q[0] - p[0]).abs() <= 1e-9 && (q[1] - p[1]).abs() <= 1e-9)
}
