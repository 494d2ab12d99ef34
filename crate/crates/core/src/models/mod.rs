//! Lattice Hamiltonians, exact diagonalization, Gibbs states and scans.

mod builders;
mod free_boson;
mod hamiltonian;
mod scans;
mod spectrum;

pub use builders::{build_model, dimer_state, spin_exchange, Boundary, ModelKind, ModelSpec};
pub use free_boson::{free_boson_block_entropy, BosonMode, FreeBosonSpec, FREE_BOSON_EXACT_MAX};
pub use hamiltonian::{LocalHamiltonian, Term, EXACT_DIMENSION_CAP};
pub use scans::{overlap_scan, overlap_table, pair_table, two_site_entanglement_scan, OverlapPoint, PairPoint, DEFAULT_OVERLAP_EPSILON};
pub use spectrum::{gibbs_state, ground_state, SpectrumResult, SpectrumSummary, DEGENERACY_TOL};
