//! Area-law checks: block-entropy scaling, the finite-temperature
//! mutual-information bound, the correlation-length bound and swap-operator
//! purity estimation.

mod blocks;
mod correlation;
mod swap;
mod thermal;

pub use blocks::{area_table, block_entropy_scan, contiguous_block, fit_log_slope, fit_slope, AreaScanRecord};
pub use correlation::{correlation_length, correlation_table, CorrelationLengthReport, RegionDecay};
pub use swap::{purity_via_swap, renyi2_block, swap_matrix, subset_purities, Renyi2Report, SwapMode, SwapPurity, MAX_SAMPLED_SWAP_SITES};
pub use thermal::{area_check_table, contiguous_partitions, mutual_info_area_check, AreaCheck};
