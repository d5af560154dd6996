//! Doubling constants, covering numbers, Poincaré constants and the
//! local-to-global upgrade checks on metric-measure graphs.

mod covering;
mod doubling;
mod poincare;
mod upgrade;

pub use covering::{covering_number, CoveringReport};
pub use doubling::{doubling_constant, doubling_constant_centers, DoublingMode, DoublingReport, ScaleRow};
pub use poincare::{poincare_constant, BallSpec, PoincareOptions, PoincareReport};
pub use upgrade::{doubling_upgrade_bound, growth_verdict, local_to_global_check, GrowthVerdict, UpgradeOptions, UpgradeOutcome};
pub use upgrade::sweep_report;

use crate::error::{input, Result};

/// Nonnegative vertex masses with finite positive total.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureField(Vec<f64>);

impl MeasureField {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if let Some((i, m)) = masses.iter().enumerate().find(|(_, m)| !(**m >= 0.0 && m.is_finite())) {
            return Err(input(format!("mass of vertex {i} is {m}; masses must be finite and nonnegative")));
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(input("total mass must be finite and positive"));
        }
        Ok(Self(masses))
    }

    pub fn uniform(n: usize, mass: f64) -> Result<Self> {
        Self::new(vec![mass; n])
    }

    pub fn masses(&self) -> &[f64] {
        &self.0
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|m| m * c).collect())
    }

    /// Mass of a vertex set.
    pub fn mass_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.0[v]).sum()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(input(format!("measure has {} masses for {} vertices", self.0.len(), n)))
        }
    }
}
