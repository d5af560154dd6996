//! Uniformization `(X_ε, d_ε, μ_β)` of a pointed measured graph and the checks
//! of its quantitative structure: boundary distance sandwich, subWhitney ball
//! inclusions, global doubling with corkscrews, boundary exponents.

mod comparisons;
mod dimension;
mod doubling;
mod space;
mod whitney;

pub use comparisons::comparability_report;
pub use dimension::{boundary_dimension_check, fit_slope, DimensionInputs, DimensionOutcome};
pub use doubling::{
    corkscrew_a, corkscrew_point, default_a0, global_doubling_check, Corkscrew, CorkscrewBranch, CorkscrewCertificate,
    GlobalDoublingOptions, GlobalDoublingOutcome,
};
pub use space::{
    boundary_distance_check, default_eps0, deformed_length, mu_beta, uniformize, uniformize_checked, IdealClosure,
    UniformizationConstants, UniformizedSpace,
};
pub use whitney::{whitney_inclusion_check, WhitneyOutcome, WhitneySample};
