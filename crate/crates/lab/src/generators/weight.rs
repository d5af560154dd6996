use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, LabError, Result};

/// Positive density on the real line, used as a weight in the first
/// coordinate. Written as `const:c`, `exp:a`, `expNeg:a` or
/// `table:x0:w0,x1:w1,...` (linear interpolation, constant beyond the ends).
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Const(f64),
    /// `e^{a|x|}`
    Exp(f64),
    /// `e^{−a|x|}`
    ExpNeg(f64),
    Table(Vec<(f64, f64)>),
}

impl Default for Weight {
    fn default() -> Self {
        Weight::Const(1.0)
    }
}

impl Weight {
    pub fn at(&self, x: f64) -> f64 {
        match self {
            Weight::Const(c) => *c,
            Weight::Exp(a) => (a * x.abs()).exp(),
            Weight::ExpNeg(a) => (-a * x.abs()).exp(),
            Weight::Table(pts) => {
                let i = pts.partition_point(|p| p.0 <= x);
                if i == 0 {
                    pts[0].1
                } else if i == pts.len() {
                    pts[pts.len() - 1].1
                } else {
                    let (x0, w0) = pts[i - 1];
                    let (x1, w1) = pts[i];
                    w0 + (w1 - w0) * (x - x0) / (x1 - x0)
                }
            }
        }
    }

    /// Exact `∫_a^b w` for `a ≤ b`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Weight::Const(c) => c * (b - a),
            Weight::Exp(k) => signed_exp_integral(*k, a, b),
            Weight::ExpNeg(k) => signed_exp_integral(-k, a, b),
            Weight::Table(pts) => {
                let mut knots = vec![a];
                knots.extend(pts.iter().map(|p| p.0).filter(|&x| x > a && x < b));
                knots.push(b);
                knots.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (self.at(w[0]) + self.at(w[1]))).sum()
            }
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match &self {
            Weight::Const(c) => *c > 0.0 && c.is_finite(),
            Weight::Exp(a) | Weight::ExpNeg(a) => a.is_finite(),
            Weight::Table(pts) => {
                !pts.is_empty()
                    && pts.iter().all(|p| p.0.is_finite() && p.1 > 0.0 && p.1.is_finite())
                    && pts.windows(2).all(|w| w[0].0 < w[1].0)
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(input(format!("weight {self} must be positive and finite")))
        }
    }
}

/// `∫_a^b e^{k|x|} dx`.
fn signed_exp_integral(k: f64, a: f64, b: f64) -> f64 {
    // primitive of e^{k s} on s ≥ 0, vanishing at 0
    let half = |s: f64| if k == 0.0 { s } else { (k * s).exp_m1() / k };
    if a >= 0.0 {
        half(b) - half(a)
    } else if b <= 0.0 {
        half(-a) - half(-b)
    } else {
        half(-a) + half(b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Const(c) => write!(f, "const:{c}"),
            Weight::Exp(a) => write!(f, "exp:{a}"),
            Weight::ExpNeg(a) => write!(f, "expNeg:{a}"),
            Weight::Table(pts) => {
                let cells: Vec<String> = pts.iter().map(|(x, w)| format!("{x}:{w}")).collect();
                write!(f, "table:{}", cells.join(","))
            }
        }
    }
}

impl FromStr for Weight {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| input(format!("bad number {t:?} in weight {s:?}")));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let w = match kind {
            "const" => Weight::Const(if rest.is_empty() { 1.0 } else { num(rest)? }),
            "exp" => Weight::Exp(num(rest)?),
            "expNeg" => Weight::ExpNeg(num(rest)?),
            "table" => {
                let pts = rest
                    .split(',')
                    .map(|cell| {
                        let (x, w) = cell.split_once(':').ok_or_else(|| input(format!("table cell {cell:?} needs x:w")))?;
                        Ok((num(x)?, num(w)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Weight::Table(pts)
            }
            other => return Err(input(format!("unknown weight kind {other:?}"))),
        };
        w.validate()
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(w: &Weight, a: f64, b: f64) -> f64 {
        let n = 2000;
        let h = (b - a) / n as f64;
        (0..=n)
            .map(|i| {
                let c = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                c * w.at(a + i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["const:2", "exp:1", "expNeg:0.5", "table:-1:1,0:2,1:1"] {
            let w: Weight = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
        }
        assert!("exp:x".parse::<Weight>().is_err());
        assert!("const:-1".parse::<Weight>().is_err());
        assert!("table:1:1,0:1".parse::<Weight>().is_err());
    }

    #[test]
    fn integrals_match_quadrature() {
        let ws: [Weight; 4] = [
            Weight::Const(1.5),
            Weight::Exp(1.0),
            Weight::ExpNeg(0.7),
            "table:-1:1,0:3,2:0.5".parse().unwrap(),
        ];
        for w in &ws {
            for (a, b) in [(-2.0, -0.5), (-0.75, 1.25), (0.25, 2.5)] {
                assert!((w.integral(a, b) - simpson(w, a, b)).abs() < 1e-5, "{w} on [{a},{b}]");
            }
        }
    }
}
