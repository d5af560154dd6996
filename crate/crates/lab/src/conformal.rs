//! Exact integrals of distance-dependent densities along graph edges.
//!
//! Along an edge `(u, v)` of length `ℓ`, the distance from the point at
//! parameter `t` to a reference set is `min(a + t, b + ℓ − t)` where `a`, `b`
//! are the endpoint distances. The minimum switches branch at
//! `t* = clamp((ℓ + b − a)/2, 0, ℓ)`, so the integral of any density of the
//! distance splits into two primitives.

/// Density as a function of distance to a reference set, given through its
/// integral over an interval of distances.
pub trait RadialDensity {
    /// `∫_{s0}^{s1} f(s) ds` for `0 ≤ s0 ≤ s1`.
    fn integral(&self, s0: f64, s1: f64) -> f64;
}

/// `e^{−εs}`, the uniformizing density.
#[derive(Debug, Clone, Copy)]
pub struct Exponential {
    pub eps: f64,
}

impl RadialDensity for Exponential {
    fn integral(&self, s0: f64, s1: f64) -> f64 {
        (-self.eps * s0).exp() * -(-self.eps * (s1 - s0)).exp_m1() / self.eps
    }
}

/// `1/s`, the quasihyperbolic density.
#[derive(Debug, Clone, Copy)]
pub struct InverseDistance;

impl RadialDensity for InverseDistance {
    fn integral(&self, s0: f64, s1: f64) -> f64 {
        if s1 == s0 {
            0.0
        } else if s0 <= 0.0 {
            f64::INFINITY
        } else {
            ((s1 - s0) / s0).ln_1p()
        }
    }
}

/// `s^{−θ}` for `0 ≤ θ ≤ 1`; interpolates between length and quasihyperbolic
/// length when searching for well-behaved curves.
#[derive(Debug, Clone, Copy)]
pub struct PowerDensity {
    pub theta: f64,
}

impl RadialDensity for PowerDensity {
    fn integral(&self, s0: f64, s1: f64) -> f64 {
        let q = 1.0 - self.theta;
        if self.theta == 0.0 {
            s1 - s0
        } else if q.abs() < 1e-12 {
            InverseDistance.integral(s0, s1)
        } else {
            (s1.powf(q) - s0.powf(q)) / q
        }
    }
}

/// Branch switch point of `min(a + t, b + ℓ − t)` on `[0, ℓ]`.
pub fn switch_point(a: f64, b: f64, len: f64) -> f64 {
    ((len + b - a) / 2.0).clamp(0.0, len)
}

/// Integral of the density over the whole edge.
pub fn edge_integral(f: &impl RadialDensity, a: f64, b: f64, len: f64) -> f64 {
    let ts = switch_point(a, b, len);
    f.integral(a, a + ts) + f.integral(b, b + (len - ts))
}

/// Integral of the density over the initial piece `[0, tau]` of the edge.
pub fn partial_edge_integral(f: &impl RadialDensity, a: f64, b: f64, len: f64, tau: f64) -> f64 {
    let tau = tau.clamp(0.0, len);
    let ts = switch_point(a, b, len);
    if tau <= ts {
        f.integral(a, a + tau)
    } else {
        f.integral(a, a + ts) + f.integral(b + (len - tau), b + (len - ts))
    }
}
