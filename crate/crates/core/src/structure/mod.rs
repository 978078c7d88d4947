//! Structural analysis: strongly connected components, periods, the set of
//! vertices met by paths between two vertices, and itineraries.

pub mod itinerary;
pub mod scc;

pub use itinerary::{
    collapse, count_variants, enumerate_variants, factorize, fold_variants, itinerary,
    shortest_within, variant_of_path, Factor, Itinerary, ItineraryVariant, Step, VariantCount,
    VariantMeasure, DEFAULT_VARIANT_GUARD,
};
pub use scc::{period, relevant_vertices, scc_decompose, Component, SccDecomposition};
