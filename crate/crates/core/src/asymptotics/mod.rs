//! Asymptotic descriptors and how to compute them: the cycle weight of cycle
//! components, the decay-rate solver for the other strongly connected
//! components, the composition/union algebra, and approximate graphs.

pub mod approx;
pub mod class;
pub mod classify;
pub mod spectral;

pub use approx::{
    approx_rate_sweep, build_approximate, build_approximate_guarded, ApproximateGraph, SweepPoint,
    DEFAULT_SIZE_GUARD,
};
pub use class::{compose, union_of, AsymptoticClass};
pub use classify::{
    analyze, classify, polynomial_rate, polynomial_rate_dp, Analysis, ComponentSummary,
};
pub use spectral::{
    cycle_rate, solve_log_rate, solve_log_rate_traced, spectral_radius, ComponentMatrix,
    DenseMatrix, NonNegativeOperator, SparseMatrix,
};
