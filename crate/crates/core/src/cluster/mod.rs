//! CPQR-based cluster assignment and the baselines it is compared against.

mod assign;
mod kmeans;
mod leverage;
mod ocs;
mod recovery;

pub use assign::{
    assign_deterministic, assign_deterministic_with, assign_randomized, assign_randomized_with, indicator_basis,
    AssignOptions, AssignWarning, AssignmentResult, DEGENERATE_SIGMA, ORTHONORMALITY_TOL,
};
pub use kmeans::{
    kmeans_objective, kmeans_pp, kmeans_seeded, InitialCenters, KmeansResult, DEFAULT_KMEANS_ITER, KMEANS_SHIFT_TOL,
};
pub use leverage::{leverage_distribution, randomized_sample_count, LeverageDistribution};
pub use ocs::{ocs_sample, OcsParams, OcsSample};
pub use recovery::exact_recovery;
