use crate::error::{arg, Result};
use crate::linalg::trace_norm_hermitian;
use crate::state::{partial_transpose, DensityOperator, PureState, RegionPartition};

/// max(‖ρ^{T_A}‖₁ − 1, 0), without the conventional factor ½.
pub fn negativity(rho: &DensityOperator, part: &RegionPartition) -> Result<f64> {
    let pt = partial_transpose(rho, part)?;
    Ok((trace_norm_hermitian(&pt)? - 1.0).max(0.0))
}

/// C = 2|det c| for the 2×2 amplitude matrix of a two-qubit pure state.
pub fn concurrence_2q(psi: &PureState) -> Result<f64> {
    if psi.space().dims() != [2, 2] {
        return arg(format!("concurrence needs two qubits, got dims {:?}", psi.space().dims()));
    }
    let a = psi.amplitudes();
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}
