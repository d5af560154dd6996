use serde::Serialize;

use super::{doubling_constant, poincare_constant, BallSpec, DoublingMode, MeasureField, PoincareOptions};
use crate::error::{input, Result};
use crate::metric::MetricGraph;
use crate::report::{Status, Table, VerificationReport};
use crate::sampling;

#[derive(Debug, Clone, Copy)]
pub struct UpgradeOptions {
    /// False for fixtures that emulate a non-quasiconvex space; the upgrade
    /// bound does not apply to them and the outcome is only informative.
    pub quasiconvex: bool,
    /// Exponent and dilation for the Poincaré comparison, if requested.
    pub poincare: Option<(f64, f64)>,
    pub poincare_centers: usize,
    pub seed: u64,
}

impl Default for UpgradeOptions {
    fn default() -> Self {
        Self {
            quasiconvex: true,
            poincare: None,
            poincare_centers: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UpgradeOutcome {
    pub r0: f64,
    pub r1: f64,
    pub cd_r0: f64,
    pub cd_r1: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub quasiconvex: bool,
    pub cpi_r0: Option<f64>,
    pub cpi_r1: Option<f64>,
}

impl UpgradeOutcome {
    pub fn status(&self) -> Status {
        if !self.quasiconvex {
            Status::Inconclusive
        } else {
            Status::from_pass(self.within_bound)
        }
    }

    pub fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("upgrade", "doubling-upgrade/quasiconvex-length-space", self.status())
            .measure("R0", self.r0)
            .measure("R1", self.r1)
            .measure("CdR0", self.cd_r0)
            .measure("CdR1", self.cd_r1)
            .predict("CdR1Bound", self.bound);
        if let Some(c) = self.cpi_r0 {
            r = r.measure("CpiLowerR0", c);
        }
        if let Some(c) = self.cpi_r1 {
            r = r.measure("CpiLowerR1", c);
        }
        if !self.quasiconvex {
            r = r.note("fixture flagged non-quasiconvex; the upgrade bound does not apply");
        }
        r
    }
}

/// Upper bound for the doubling constant at radii up to `r1` from the constant
/// `cd` valid up to `r0`, in a length space. For `r0 < r ≤ r1`, `B(x, 2r)` is
/// covered by at most `cd^{7(n+4)/6}` balls of radius `r0/4` with
/// `n = ⌈8 r1 / r0⌉`, and each of them has mass at most `cd^{n+1} μ(B(x, r))`
/// by chaining doublings along a path from `x`.
pub fn doubling_upgrade_bound(cd: f64, r0: f64, r1: f64) -> f64 {
    if r1 <= r0 {
        return cd;
    }
    let n = (8.0 * r1 / r0).ceil();
    cd.powf(7.0 * (n + 4.0) / 6.0 + n + 1.0).max(cd)
}

/// Measures doubling (and optionally Poincaré lower bounds) at scales `r0` and
/// `r1` and compares the growth with [`doubling_upgrade_bound`].
pub fn local_to_global_check(g: &MetricGraph, mu: &MeasureField, r0: f64, r1: f64, opts: UpgradeOptions) -> Result<UpgradeOutcome> {
    if !(r0 > 0.0) || !(r1 >= r0) {
        return Err(input("need 0 < R0 ≤ R1"));
    }
    let cd_r0 = doubling_constant(g, mu, r0, DoublingMode::Exhaustive)?.cd;
    let cd_r1 = if r1 == r0 {
        cd_r0
    } else {
        doubling_constant(g, mu, r1, DoublingMode::Exhaustive)?.cd
    };
    let bound = doubling_upgrade_bound(cd_r0, r0, r1);
    let (cpi_r0, cpi_r1) = match opts.poincare {
        None => (None, None),
        Some((p, lambda)) => {
            let centers = sampling::distinct_indices(g.len(), opts.poincare_centers, opts.seed);
            let worst = |radius: f64| -> Result<f64> {
                let mut best: f64 = 0.0;
                for &c in &centers {
                    let o = PoincareOptions {
                        p,
                        lambda,
                        seed: opts.seed,
                        ..Default::default()
                    };
                    match poincare_constant(g, mu, BallSpec { center: c, radius }, o) {
                        Ok(rep) => best = best.max(rep.lower_bound_cpi),
                        Err(crate::LabError::Input(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Ok(best)
            };
            let a = worst(r0)?;
            let b = if r1 == r0 { a } else { worst(r1)? };
            (Some(a), Some(b))
        }
    };
    Ok(UpgradeOutcome {
        r0,
        r1,
        cd_r0,
        cd_r1,
        bound,
        within_bound: cd_r1 <= bound,
        quasiconvex: opts.quasiconvex,
        cpi_r0,
        cpi_r1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthVerdict {
    /// Last value within 10% of the first.
    Stable,
    /// Nondecreasing with at least a doubling from first to last.
    Growing,
    Undecided,
}

/// Trend of a constant measured along a truncation sweep `(T, value)`.
pub fn growth_verdict(values: &[(f64, f64)]) -> GrowthVerdict {
    let (Some(first), Some(last)) = (values.first(), values.last()) else {
        return GrowthVerdict::Undecided;
    };
    let ratio = last.1 / first.1;
    let monotone = values.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    if values.len() >= 2 && monotone && ratio >= 2.0 {
        GrowthVerdict::Growing
    } else if ratio.is_finite() && (1.0 / 1.1..=1.1).contains(&ratio) {
        GrowthVerdict::Stable
    } else {
        GrowthVerdict::Undecided
    }
}

/// Sweep table and verdict for constants measured at increasing truncations.
pub fn sweep_report(check: &str, anchor: &str, values: &[(f64, f64)], expect: GrowthVerdict) -> VerificationReport {
    let verdict = growth_verdict(values);
    let mut t = Table::new("truncationSweep", &["T", "value"]);
    for &(x, v) in values {
        t.push(&[x, v]);
    }
    VerificationReport::new(check, anchor, Status::from_pass(verdict == expect))
        .note(format!("growth verdict: {verdict:?}"))
        .table(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Edge;

    fn path(n: usize) -> MetricGraph {
        let edges = (0..n - 1).map(|i| Edge { u: i, v: i + 1, len: 1.0 }).collect();
        MetricGraph::new(n, edges).unwrap()
    }

    #[test]
    fn equal_scales_give_identical_constants() {
        let g = path(12);
        let mu = MeasureField::uniform(12, 1.0).unwrap();
        let o = local_to_global_check(&g, &mu, 2.0, 2.0, UpgradeOptions::default()).unwrap();
        assert_eq!(o.cd_r0, o.cd_r1);
        assert_eq!(o.bound, o.cd_r0);
        assert!(o.within_bound);
    }

    #[test]
    fn bound_grows_with_scale_ratio() {
        assert!(doubling_upgrade_bound(2.0, 1.0, 4.0) > doubling_upgrade_bound(2.0, 1.0, 2.0));
        assert_eq!(doubling_upgrade_bound(3.0, 1.0, 0.5), 3.0);
    }

    #[test]
    fn growth_verdicts() {
        assert_eq!(growth_verdict(&[(1.0, 2.0), (2.0, 2.05)]), GrowthVerdict::Stable);
        assert_eq!(growth_verdict(&[(1.0, 2.0), (2.0, 5.0), (3.0, 20.0)]), GrowthVerdict::Growing);
        assert_eq!(growth_verdict(&[]), GrowthVerdict::Undecided);
    }
}
