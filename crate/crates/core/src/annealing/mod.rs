//! Analog reference evolution, spectral gaps, adiabatic-time and Trotter
//! step estimates, and digitization into per-block angles.

mod analog;
mod gap;
mod plan;
mod problem;

pub use analog::{analog_evolve, AnalogTrajectory, CONVERGENCE_TOL, MIN_ANALOG_STEPS};
pub use gap::{
    adiabatic_time_estimate, cluster_levels, gap_profile, gap_profile_on, gap_profile_with_vectors, stdat_step_bound, AdiabaticMode,
    GapProfile, GapSample, StepBound, CLUSTER_RTOL, MIN_GAP_GRID,
};
pub use plan::{
    block_exact_unitary, block_reference_unitary, block_split_unitary, digitized_evolve, digitized_unitary,
    make_plan, splitting_error, splitting_error_on, DigitizedPlan, PlanBlock, DENSE_BLOCK_BUDGET,
};
pub use problem::{AnnealingProblem, Subspace};
