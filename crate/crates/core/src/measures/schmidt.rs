use faer::Mat;
use num_complex::Complex64 as c64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{svd, CMat};
use crate::state::{PureState, RegionPartition};

/// Singular values below this are treated as exact zeros.
const COEFF_FLOOR: f64 = 1e-14;

/// Schmidt coefficients d_k (nonincreasing, positive) with the bases |u_k⟩
/// and |v_k⟩ stored as matrix columns: |ψ⟩ = Σ_k d_k |u_k⟩|v_k⟩.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub basis_a: CMat,
    pub basis_b: CMat,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtSummary {
    pub coefficients: Vec<f64>,
    pub rank: usize,
    pub product: bool,
}

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// One coefficient, equal to 1 within 1e-10.
    pub fn is_product(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0] > 1.0 - 1e-10
    }

    /// Σ d_k² over the kept coefficients.
    pub fn weight(&self) -> f64 {
        self.coefficients.iter().map(|d| d * d).sum()
    }

    /// Amplitude matrix Σ_k d_k u_k v_kᵀ.
    pub fn reconstruct(&self) -> CMat {
        let (ra, rb) = (self.basis_a.nrows(), self.basis_b.nrows());
        Mat::from_fn(ra, rb, |a, b| {
            let mut acc = c64::new(0.0, 0.0);
            for (k, d) in self.coefficients.iter().enumerate() {
                acc += self.basis_a[(a, k)] * self.basis_b[(b, k)] * *d;
            }
            acc
        })
    }

    pub fn summary(&self) -> SchmidtSummary {
        SchmidtSummary { coefficients: self.coefficients.clone(), rank: self.rank(), product: self.is_product() }
    }
}

/// Singular value decomposition of the amplitude matrix along the cut.
pub fn schmidt_decompose(psi: &PureState, part: &RegionPartition) -> Result<SchmidtData> {
    let c = psi.amplitude_matrix(part)?;
    schmidt_of_matrix(&c)
}

pub(crate) fn schmidt_of_matrix(c: &CMat) -> Result<SchmidtData> {
    let (u, s, v) = svd(c)?;
    let rank = s.iter().take_while(|&&x| x > COEFF_FLOOR).count().max(1);
    let basis_a = Mat::from_fn(u.nrows(), rank, |i, k| u[(i, k)]);
    // C = U S V† ⇒ the B-side vectors are the conjugated columns of V.
    let basis_b = Mat::from_fn(v.nrows(), rank, |i, k| v[(i, k)].conj());
    Ok(SchmidtData { coefficients: s[..rank].to_vec(), basis_a, basis_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, max_abs_diff};
    use crate::state::SiteSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cut2() -> RegionPartition {
        RegionPartition::chain(2, &[0]).unwrap()
    }

    #[test]
    fn theta_state_coefficients() {
        let theta = 0.3;
        let s = schmidt_decompose(&PureState::theta_state(theta), &cut2()).unwrap();
        assert!((s.coefficients[0] - theta.cos()).abs() < 1e-14);
        assert!((s.coefficients[1] - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn basis_state_is_product() {
        let psi = PureState::basis(SiteSpace::qubits(2).unwrap(), &[0, 1]).unwrap();
        let s = schmidt_decompose(&psi, &cut2()).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(s.is_product());
    }

    #[test]
    fn qubit_qutrit_against_reduced_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = PureState::random(SiteSpace::new(vec![2, 3]).unwrap(), &mut rng);
        let part = RegionPartition::chain(2, &[0]).unwrap();
        let s = schmidt_decompose(&psi, &part).unwrap();
        let c = psi.amplitude_matrix(&part).unwrap();
        let mut oracle = eigvalsh(&(&c * c.adjoint())).unwrap();
        oracle.sort_by(|a, b| b.total_cmp(a));
        for (d, l) in s.coefficients.iter().zip(&oracle) {
            assert!((d * d - l).abs() < 1e-12);
        }
        assert!(max_abs_diff(&s.reconstruct(), &c) < 1e-12);
        assert!((s.weight() - 1.0).abs() < 1e-12);
    }
}
