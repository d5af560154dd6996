//! Uniformization and hyperbolization of discrete metric-measure spaces.
//!
//! Spaces are finite weighted graphs whose shortest-path metric stands in for a
//! geodesic metric space. The crate deforms such graphs conformally, transports
//! measures alongside the metric, runs discrete p-harmonic potential theory and
//! measures the quantitative constants (ball inclusions, doubling, Poincaré,
//! energy transfer, Liouville criteria) that the constructions are expected to
//! satisfy.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod conformal;
pub mod error;
pub mod generators;
pub mod hyperbolize;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod metric;
pub mod potential;
pub mod products;
pub mod report;
pub mod sampling;
pub mod uniformize;

pub use error::{LabError, Result};
pub use measure::MeasureField;
pub use metric::{Curve, MetricGraph, PointedSpace};
pub use report::{Status, VerificationReport};
