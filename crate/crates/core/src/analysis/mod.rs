//! Characterization of solved policies.

mod hitting;
mod reduction;
mod stats;
mod surface;
mod sweep;

pub use hitting::{hitting_functional, hitting_surface_correlation, switching_advantage, HittingFunctional};
pub use reduction::{
    largest_diagonal_gamma, one_dimensional_reduction, reduce_theorem1, ReductionResult, BOUNDARY_BAND,
};
pub use stats::spearman;
pub use surface::{
    extract_surface, fit_linear_switching, is_monotone_threshold, LinearFit, SwitchingSurface, MAX_FIT_WEIGHT,
};
pub use sweep::{apply_sweep, is_subset, nested_pairs, solve_point, sweep_inclusion, SweepAxis, SweepPoint};
