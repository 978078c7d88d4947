//! Ordered path streams, lazy sequence algebra and empirical rate fits.

mod fit;
mod paths;
mod sequence;

pub use fit::{default_window, fit_asymptotics, fit_sequence, FitModel, FitReport};
pub use paths::{enumerate_paths, enumerate_paths_guarded, Limit, PathStream};
pub use sequence::{
    compose_sequences, compose_sequences_guarded, union_sequences, Outcome, RankedWeight,
    WeightSequence, DEFAULT_FRONTIER_GUARD,
};
