use serde::Serialize;

use super::MeasureField;
use crate::error::{input, Result};
use crate::metric::MetricGraph;
use crate::report::{Status, Table, VerificationReport};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoublingMode {
    Exhaustive,
    Sampled { centers: usize, seed: u64 },
}

/// Worst ratio among evaluated radii in the dyadic band `(radius/2, radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleRow {
    pub radius: f64,
    pub center: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DoublingReport {
    pub r0: f64,
    pub cd: f64,
    pub worst_center: Option<usize>,
    pub worst_radius: Option<f64>,
    pub per_scale_table: Vec<ScaleRow>,
    pub exhaustive: bool,
    pub centers_evaluated: usize,
    /// Radii whose ball and doubled ball both had zero mass.
    pub zero_mass_radii_skipped: usize,
    /// Largest distance seen from an evaluated center.
    pub max_distance: f64,
}

impl DoublingReport {
    pub fn report(&self, anchor: &str) -> VerificationReport {
        let status = if self.cd.is_finite() { Status::Pass } else { Status::Fail };
        let mut t = Table::new("perScaleTable", &["radius", "center", "ratio"]);
        for row in &self.per_scale_table {
            t.push(&[row.radius, row.center as f64, row.ratio]);
        }
        let mut r = VerificationReport::new("doubling", anchor, status)
            .measure("Cd", self.cd)
            .measure("R0", self.r0)
            .measure("centersEvaluated", self.centers_evaluated as f64)
            .measure("maxDistance", self.max_distance)
            .note(if self.exhaustive {
                "exhaustive over centers; radii grid of realized distances and their halves is exact"
            } else {
                "sampled centers; radii grid exact per center"
            })
            .table(t);
        if let (Some(c), Some(rad)) = (self.worst_center, self.worst_radius) {
            r = r.witness("worstBall", vec![c], vec![rad, self.cd]);
        }
        r
    }
}

/// Supremum of `μ(B(x,2r))/μ(B(x,r))` over centers and `r ∈ (0, R0]`, with open
/// balls. `r0 = ∞` means all scales.
pub fn doubling_constant(g: &MetricGraph, mu: &MeasureField, r0: f64, mode: DoublingMode) -> Result<DoublingReport> {
    let centers: Vec<usize> = match mode {
        DoublingMode::Exhaustive => (0..g.len()).collect(),
        DoublingMode::Sampled { centers, seed } => sampling::distinct_indices(g.len(), centers, seed),
    };
    let mut rep = doubling_constant_centers(g, mu, r0, &centers)?;
    rep.exhaustive = matches!(mode, DoublingMode::Exhaustive);
    Ok(rep)
}

/// Same estimator over an explicit center set (all radii exact per center).
pub fn doubling_constant_centers(g: &MetricGraph, mu: &MeasureField, r0: f64, centers: &[usize]) -> Result<DoublingReport> {
    mu.check_len(g.len())?;
    if !(r0 > 0.0) {
        return Err(input("R0 must be positive"));
    }
    for &c in centers {
        g.check_vertex(c)?;
    }
    let reference = if r0.is_finite() { r0 } else { g.length_scale() };
    let mut bins: Vec<Option<ScaleRow>> = Vec::new();
    let mut cd = 1.0;
    let mut worst: Option<(usize, f64)> = None;
    let mut skipped = 0;
    let mut max_distance: f64 = 0.0;
    let masses = mu.masses();

    let mut ds: Vec<f64> = Vec::with_capacity(g.len());
    let mut prefix: Vec<f64> = Vec::with_capacity(g.len() + 1);
    let mut breaks: Vec<f64> = Vec::with_capacity(2 * g.len() + 1);
    for &x in centers {
        let (dist, order) = g.sssp_ordered(x);
        ds.clear();
        prefix.clear();
        prefix.push(0.0);
        let mut acc = 0.0;
        for &v in &order {
            ds.push(dist[v]);
            acc += masses[v];
            prefix.push(acc);
        }
        max_distance = max_distance.max(*ds.last().unwrap_or(&0.0));
        merge_breakpoints(&ds, r0, &mut breaks);

        let (mut i_in, mut i_out) = (0, 0);
        for &b in &breaks {
            while i_in < ds.len() && ds[i_in] < b {
                i_in += 1;
            }
            while i_out < ds.len() && ds[i_out] < 2.0 * b {
                i_out += 1;
            }
            let inner = prefix[i_in];
            let outer = prefix[i_out];
            let ratio = if inner > 0.0 {
                outer / inner
            } else if outer > 0.0 {
                f64::INFINITY
            } else {
                skipped += 1;
                continue;
            };
            if ratio > cd {
                cd = ratio;
                worst = Some((x, b));
            }
            let k = ((reference / b).log2().floor().max(0.0) as usize).min(63);
            if bins.len() <= k {
                bins.resize(k + 1, None);
            }
            match &bins[k] {
                Some(row) if row.ratio >= ratio => {}
                _ => {
                    bins[k] = Some(ScaleRow {
                        radius: reference * 0.5f64.powi(k as i32),
                        center: x,
                        ratio,
                    })
                }
            }
        }
    }
    Ok(DoublingReport {
        r0,
        cd,
        worst_center: worst.map(|w| w.0),
        worst_radius: worst.map(|w| w.1),
        per_scale_table: bins.into_iter().flatten().collect(),
        exhaustive: true,
        centers_evaluated: centers.len(),
        zero_mass_radii_skipped: skipped,
        max_distance,
    })
}

/// Sorted, deduplicated radii in `(0, r0]` where some ball or doubled ball
/// changes: realized distances, their halves, and `r0` itself. The ratio is
/// constant on each interval `(b_{i-1}, b_i]`, so evaluating at the right
/// endpoints is exact.
fn merge_breakpoints(ds: &[f64], r0: f64, out: &mut Vec<f64>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < ds.len() || j < ds.len() {
        let take_full = j >= ds.len() || (i < ds.len() && ds[i] <= 0.5 * ds[j]);
        let b = if take_full {
            i += 1;
            ds[i - 1]
        } else {
            j += 1;
            0.5 * ds[j - 1]
        };
        if b > 0.0 && b <= r0 && out.last().is_none_or(|&l| l < b) {
            out.push(b);
        }
    }
    if r0.is_finite() && out.last().is_none_or(|&l| l < r0) {
        out.push(r0);
    }
}
