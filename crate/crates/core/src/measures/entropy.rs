use crate::error::{arg, Result};
use crate::linalg::{eigvalsh, shannon_bits, CMat};
use crate::state::{DensityOperator, PureState, RegionPartition};

use super::schmidt::schmidt_decompose;

/// von Neumann entropy (bits) of a Hermitian PSD matrix's spectrum.
pub fn von_neumann_bits(m: &CMat) -> Result<f64> {
    let ev = eigvalsh(m)?;
    Ok(shannon_bits(&ev))
}

pub fn von_neumann(rho: &DensityOperator) -> Result<f64> {
    von_neumann_bits(rho.matrix())
}

/// −Σ d_k² log₂ d_k² over the Schmidt coefficients.
pub fn entanglement_entropy(psi: &PureState, part: &RegionPartition) -> Result<f64> {
    let s = schmidt_decompose(psi, part)?;
    let probs: Vec<f64> = s.coefficients.iter().map(|d| d * d).collect();
    Ok(shannon_bits(&probs))
}

/// S_α = log₂(Σ λ^α)/(1 − α); von Neumann for |α − 1| < 1e-6.
pub fn renyi_from_spectrum(eigenvalues: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return arg(format!("Rényi order must be positive and finite, got {alpha}"));
    }
    if (alpha - 1.0).abs() < 1e-6 {
        return Ok(shannon_bits(eigenvalues));
    }
    let s: f64 = eigenvalues.iter().filter(|&&l| l > 0.0).map(|l| l.powf(alpha)).sum();
    Ok((s.log2() / (1.0 - alpha)).max(0.0))
}

pub fn renyi_entropy(rho: &DensityOperator, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return arg(format!("Rényi order must be positive, got {alpha}"));
    }
    renyi_from_spectrum(&rho.eigenvalues()?, alpha)
}
