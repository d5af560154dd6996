//! Quasihyperbolic space `(Ω, k)` and measure `μ^α` of a bounded domain
//! graph, with the local comparison, doubling and round-trip checks.

mod domain;
mod measure;
mod quasihyperbolic;
mod roundtrip;
mod uniformity;

pub use domain::UniformDomain;
pub use measure::{hyperbolized_doubling_check, mu_alpha, HyperbolizedDoublingOutcome};
pub use quasihyperbolic::{k_estimate_check, k_length, quasihyperbolic, QuasihyperbolicSpace};
pub use roundtrip::{roundtrip_bilipschitz, RoundTrip};
pub use uniformity::{
    measure_uniformity, quasiconvexity_constant, uniform_curve_check, uniformity_constant, UniformCurveCheck, UniformCurveFinder,
    UniformityEstimate,
};
