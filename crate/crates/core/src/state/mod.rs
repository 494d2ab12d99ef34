//! Dense pure and mixed states on a finite lattice of qudits.

mod density;
pub mod io;
mod kraus;
pub mod pauli;
mod pure;
mod space;

pub use density::{embed_operator, expectation, partial_trace, partial_transpose, DensityOperator};
pub use kraus::{apply_measurement, sample_measurement, validate_kraus, KrausCheck, KrausSet, Measurable, Outcome, Selection};
pub use pure::{compose, PureState};
pub use space::{Keep, Lattice, RegionPartition, SiteSpace, DEFAULT_DIMENSION_CAP};

use crate::error::Result;
use crate::linalg::CMat;

/// Anything with a reduced density matrix on a subset of its sites.
pub trait State {
    fn space(&self) -> &SiteSpace;

    /// Reduced density matrix of `sites`, in the listed order.
    fn reduced_matrix(&self, sites: &[usize]) -> Result<CMat>;

    fn density(&self) -> DensityOperator;
}
