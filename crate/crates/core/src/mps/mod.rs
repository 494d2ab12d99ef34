//! Matrix product states on chains: construction from local maps,
//! amplitudes, canonical forms, contractions and a variational
//! ground-state search.

mod canonical;
mod contract;
pub mod io;
mod tensor;
mod variational;

pub use canonical::{dense_to_mps, left_canonicalize, right_canonicalize, Compression};
pub use contract::{
    canonical_local_expectation, mps_correlation, mps_expectation, mps_expectation_ordered, mps_norm_squared,
    ContractionOrder, CorrelationDecay, CorrelationReport,
};
pub use tensor::{gauge_residuals, mps_amplitude, mps_from_maps, mps_to_dense, Gauge, MpsBoundary, MpsState, SiteMap, GAUGE_TOL};
pub use variational::{variational_ground_search, VariationalOptions, VariationalResult};
