//! Spin-squeezing parameter of a qubit ensemble.

use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::{kron, trace_product, CMat};
use crate::state::pauli::{sigma_x, sigma_y, sigma_z};
use crate::state::State;

#[derive(Debug, Clone, Serialize)]
pub struct SqueezingReport {
    pub xi: f64,
    /// (⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩).
    pub mean_spin: [f64; 3],
    /// ΔS_z².
    pub variance_z: f64,
}

impl SqueezingReport {
    pub fn entangled(&self) -> bool {
        self.xi < 1.0
    }
}

/// ξ = N ΔS_z² / (⟨S_x⟩² + ⟨S_y⟩²) with S_α = ½ Σ σ_α.
///
/// Built from one- and two-site marginals, so the cost is quadratic in the
/// number of sites rather than in the Hilbert-space dimension.
pub fn spin_squeezing<S: State + ?Sized>(state: &S) -> Result<SqueezingReport> {
    let space = state.space();
    if !space.is_qubits() {
        return arg(format!("spin squeezing needs qubit sites, got dims {:?}", space.dims()));
    }
    let n = space.n_sites();
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let mut mean = [0.0; 3];
    for i in 0..n {
        let r = state.reduced_matrix(&[i])?;
        for (m, p) in mean.iter_mut().zip(&paulis) {
            *m += 0.5 * trace_product(&r, p).re;
        }
    }
    let zz: CMat = kron(&paulis[2], &paulis[2]);
    // ⟨S_z²⟩ = ¼ (N + Σ_{i≠j} ⟨σ_z^i σ_z^j⟩).
    let mut sz2 = n as f64;
    for i in 0..n {
        for j in i + 1..n {
            let r = state.reduced_matrix(&[i, j])?;
            sz2 += 2.0 * trace_product(&r, &zz).re;
        }
    }
    sz2 *= 0.25;
    let variance_z = (sz2 - mean[2] * mean[2]).max(0.0);
    let transverse = mean[0] * mean[0] + mean[1] * mean[1];
    if transverse <= 1e-12 {
        return Err(Error::UndefinedParameter(format!(
            "transverse mean spin ⟨S_x⟩² + ⟨S_y⟩² = {transverse:e} is below 1e-12"
        )));
    }
    Ok(SqueezingReport { xi: n as f64 * variance_z / transverse, mean_spin: mean, variance_z })
}
