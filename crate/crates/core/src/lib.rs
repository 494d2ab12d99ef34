//! Entanglement measures, area-law checks and matrix product states for
//! small spin lattices.
//!
//! States are dense vectors and matrices over a [`state::SiteSpace`] whose
//! basis is ordered lexicographically with site 0 slowest. Entropies are in
//! bits. The Pauli σ_z follows the convention σ_z = |1⟩⟨1| − |0⟩⟨0|.

pub mod area_law;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod mps;
pub mod protocols;
pub mod state;
pub mod table;

pub use error::{Error, Result};
pub use state::{DensityOperator, Keep, KrausSet, Lattice, PureState, RegionPartition, SiteSpace, State};
