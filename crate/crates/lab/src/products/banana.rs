use serde::Serialize;

use crate::error::{input, LabError, Result};
use crate::hyperbolize::{UniformCurveFinder, UniformDomain};
use crate::metric::{Curve, MetricGraph};

/// Both inequalities a long curve must satisfy, evaluated on the result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BananaCertificate {
    pub target: f64,
    pub length: f64,
    /// `L/(5A)`.
    pub lower: f64,
    /// `(A+1)L`.
    pub upper: f64,
    /// Smallest `16A² d_Ω(z) / min(l(γ_{x,z}), l(γ_{z,y}))` over the vertices.
    pub min_depth_ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BananaCurve {
    pub curve: Curve,
    /// Deepest vertex, the common target of both approach curves.
    pub x0: usize,
    pub x_hat: usize,
    pub y_hat: usize,
    pub stages: Vec<String>,
    pub certificate: BananaCertificate,
}

/// Builds uniform curves of prescribed length `L` between two points: each
/// endpoint walks toward the deepest vertex `x₀` for a length proportional to
/// `L` (or to the middle of that walk and back and forth), and the two turning
/// points are joined by a uniform curve.
pub struct BananaBuilder<'a> {
    dom: &'a UniformDomain,
    finder: UniformCurveFinder<'a>,
    a: f64,
    diam: f64,
    x0: usize,
}

impl<'a> BananaBuilder<'a> {
    pub fn new(dom: &'a UniformDomain, a: f64) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(input(format!("uniformity constant must be at least 1, got {a}")));
        }
        Ok(Self {
            dom,
            finder: UniformCurveFinder::new(dom),
            a,
            diam: dom.graph().diameter(),
            x0: dom.max_d_omega().0,
        })
    }

    /// Target lengths are rounded to the nearest mesh vertex; when that
    /// leaves the curve too short, they are rounded up instead.
    pub fn build(&self, x: usize, y: usize, l: f64) -> Result<BananaCurve> {
        let nearest = self.build_rounded(x, y, l, Rounding::Nearest)?;
        if nearest.certificate.holds || nearest.certificate.length >= nearest.certificate.lower {
            return Ok(nearest);
        }
        let mut up = self.build_rounded(x, y, l, Rounding::Up)?;
        up.stages.push("lengths rounded up to reach the lower bound".into());
        Ok(if up.certificate.holds { up } else { nearest })
    }

    fn build_rounded(&self, x: usize, y: usize, l: f64, rounding: Rounding) -> Result<BananaCurve> {
        let g = self.dom.graph();
        g.check_vertex(x)?;
        g.check_vertex(y)?;
        let d_xy = g.sssp(x)[y];
        let slack = g.tol();
        if l < d_xy - slack {
            return Err(LabError::Precondition(format!("length {l} is below d(x, y) = {d_xy}")));
        }
        if l > self.diam + slack {
            return Err(LabError::Precondition(format!("length {l} exceeds the diameter {}", self.diam)));
        }
        let mut stages = Vec::new();
        let cx = self.approach(x, l, "x", rounding, &mut stages)?;
        let cy = self.approach(y, l, "y", rounding, &mut stages)?;
        let (x_hat, y_hat) = (cx.end(), cy.end());
        let middle = if x_hat == y_hat {
            stages.push("middle: turning points coincide".into());
            Curve::from_vertices(g, vec![x_hat])?
        } else {
            let (c, check, theta) = self.finder.find(x_hat, y_hat)?;
            stages.push(format!("middle: uniform curve with constant {:.4} (θ = {theta})", check.minimal_a));
            c
        };
        let curve = cx.concat(g, &middle)?.concat(g, &cy.reversed(g))?;
        let certificate = self.certify(&curve, l);
        Ok(BananaCurve {
            curve,
            x0: self.x0,
            x_hat,
            y_hat,
            stages,
            certificate,
        })
    }

    /// Curve from `x` to its turning point.
    fn approach(&self, x: usize, l: f64, label: &str, rounding: Rounding, stages: &mut Vec<String>) -> Result<Curve> {
        let g = self.dom.graph();
        let (gamma, _, _) = self.finder.find(x, self.x0)?;
        let lg = gamma.length();
        let a = self.a;
        if l <= 5.0 * a * lg {
            let c = prefix(g, &gamma, l / (10.0 * a), rounding)?;
            stages.push(format!(
                "{label}: capped approach of length {:.6} along a curve of length {lg:.6}",
                c.length()
            ));
            Ok(c)
        } else {
            let half = prefix(g, &gamma, lg / 2.0, rounding)?;
            let rest = &gamma.vertices()[half.vertices().len() - 1..];
            let loop_ = excursion(g, rest, l / (20.0 * a), rounding)?;
            stages.push(format!(
                "{label}: approach to the midpoint ({:.6}) plus an excursion of length {:.6}",
                half.length(),
                loop_.length()
            ));
            half.concat(g, &loop_)
        }
    }

    fn certify(&self, curve: &Curve, l: f64) -> BananaCertificate {
        let a = self.a;
        let len = curve.length();
        let d = self.dom.d_omega();
        let mut min_depth_ratio = f64::INFINITY;
        for (&z, &t) in curve.vertices().iter().zip(curve.arclength()) {
            let m = t.min(len - t);
            if m > 0.0 {
                min_depth_ratio = min_depth_ratio.min(16.0 * a * a * d[z] / m);
            }
        }
        let (lower, upper) = (l / (5.0 * a), (a + 1.0) * l);
        let eps = 1e-12;
        BananaCertificate {
            target: l,
            length: len,
            lower,
            upper,
            min_depth_ratio,
            holds: len >= lower * (1.0 - eps) && len <= upper * (1.0 + eps) && min_depth_ratio >= 1.0 - eps,
        }
    }
}

/// One-shot long curve of length about `l` between `x` and `y` in a domain
/// with uniformity constant `a`.
pub fn long_banana_curve(dom: &UniformDomain, a: f64, x: usize, y: usize, l: f64) -> Result<BananaCurve> {
    BananaBuilder::new(dom, a)?.build(x, y, l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Nearest,
    Up,
}

/// Initial piece whose arc length is nearest to, or the shortest at least,
/// `target` (the whole curve when it is shorter).
fn prefix(g: &MetricGraph, c: &Curve, target: f64, rounding: Rounding) -> Result<Curve> {
    match rounding {
        Rounding::Nearest => Ok(c.prefix_near(g, target)),
        Rounding::Up => {
            let s = c.arclength();
            let i = s.iter().position(|&t| t >= target).unwrap_or(s.len() - 1);
            Curve::from_vertices(g, c.vertices()[..=i].to_vec())
        }
    }
}

/// Walk from `path[0]` along `path` (bouncing at its ends) for an arc length
/// of about `half`, then back the same way.
fn excursion(g: &MetricGraph, path: &[usize], half: f64, rounding: Rounding) -> Result<Curve> {
    let track: Vec<usize> = if path.len() >= 2 {
        path.to_vec()
    } else {
        let v = path[0];
        let &(w, _) = g
            .neighbors(v)
            .first()
            .ok_or_else(|| input(format!("vertex {v} has no neighbour")))?;
        vec![v, w]
    };
    let mut out = vec![track[0]];
    let (mut pos, mut step) = (0usize, 1isize);
    let mut acc = 0.0;
    while acc < half {
        if pos + 1 == track.len() {
            step = -1;
        } else if pos == 0 {
            step = 1;
        }
        let next = pos.checked_add_signed(step).expect("track index stays in range");
        let e = g.edge_between(track[pos], track[next]).expect("track steps along edges");
        let len = g.edge(e).len;
        if rounding == Rounding::Nearest && acc + len - half > half - acc {
            break;
        }
        acc += len;
        pos = next;
        out.push(track[pos]);
    }
    let back: Vec<usize> = out.iter().rev().skip(1).copied().collect();
    out.extend(back);
    Curve::from_vertices(g, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_interval, gen_square, vertex_at};

    #[test]
    fn interval_pair_at_exact_distance() {
        let dom = gen_interval(0.125).unwrap().domain;
        let g = dom.graph();
        let x = vertex_at(g, [-0.5, 0.0]).unwrap();
        let y = vertex_at(g, [0.5, 0.0]).unwrap();
        let b = long_banana_curve(&dom, 1.0, x, y, 1.0).unwrap();
        assert!(b.certificate.holds, "{b:?}");
        assert_eq!(b.curve.start(), x);
        assert_eq!(b.curve.end(), y);
    }

    #[test]
    fn equal_endpoints_at_full_length_make_a_loop() {
        let dom = gen_interval(0.125).unwrap().domain;
        let g = dom.graph();
        let x = vertex_at(g, [0.25, 0.0]).unwrap();
        let b = long_banana_curve(&dom, 1.0, x, x, 2.0).unwrap();
        assert_eq!(b.curve.start(), x);
        assert_eq!(b.curve.end(), x);
        assert!(b.curve.length() > 0.0);
        assert!(b.certificate.holds, "{b:?}");
    }

    #[test]
    fn length_below_distance_is_rejected() {
        let dom = gen_interval(0.125).unwrap().domain;
        let g = dom.graph();
        let x = vertex_at(g, [-0.5, 0.0]).unwrap();
        let y = vertex_at(g, [0.5, 0.0]).unwrap();
        assert!(matches!(long_banana_curve(&dom, 1.0, x, y, 0.5), Err(LabError::Precondition(_))));
        assert!(matches!(long_banana_curve(&dom, 1.0, x, y, 3.0), Err(LabError::Precondition(_))));
    }

    #[test]
    fn square_curves_certify_across_lengths() {
        let dom = gen_square(0.125).unwrap().domain;
        let g = dom.graph();
        let x = vertex_at(g, [-0.75, -0.5]).unwrap();
        let y = vertex_at(g, [-0.5, -0.75]).unwrap();
        let b = BananaBuilder::new(&dom, 2.0).unwrap();
        for l in [0.5, 1.0, 2.0, 4.0] {
            let c = b.build(x, y, l).unwrap();
            assert!(c.certificate.holds, "L = {l}: {:?}", c.certificate);
        }
    }
}
