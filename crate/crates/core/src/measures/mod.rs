//! Entanglement and correlation quantifiers and detectors.

mod entropy;
mod fidelity;
mod localizable;
mod mutual;
mod negativity;
mod report;
mod schmidt;
mod squeezing;
mod witness;

pub use entropy::{entanglement_entropy, renyi_entropy, renyi_from_spectrum, von_neumann, von_neumann_bits};
pub use fidelity::{mes_fidelity, mes_fidelity_closed_form, FidelityOptions, FidelityResult};
pub use localizable::{localizable_entanglement, localized_average, LocalizableOptions, LocalizableResult, MAX_LOCALIZABLE_SITES};
pub use mutual::{mutual_information, mutual_information_between, product_distance};
pub(crate) use mutual::product_of_marginals;
pub use negativity::{concurrence_2q, negativity};
pub use report::{MeasureReport, PartitionRecord};
pub use schmidt::{schmidt_decompose, SchmidtData, SchmidtSummary};
pub use squeezing::{spin_squeezing, SqueezingReport};
pub use witness::{
    annihilation, chsh_operator, chsh_witness, coherent, cv_witness, quadratures, truncation_leak, two_mode_squeezed, WitnessId,
    WitnessReport,
};
