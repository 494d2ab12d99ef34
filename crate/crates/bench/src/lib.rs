//! Fixtures shared by the criterion benches.

use qentangle_core::models::{build_model, LocalHamiltonian, ModelKind, ModelSpec};
use qentangle_core::{DensityOperator, PureState, SiteSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Haar-random pure state on `n` qubits.
pub fn random_pure(n: usize, seed: u64) -> PureState {
    PureState::random(SiteSpace::qubits(n).expect("small n"), &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Full-rank random density operator on `n` qubits.
pub fn random_mixed(n: usize, seed: u64) -> DensityOperator {
    let space = SiteSpace::qubits(n).expect("small n");
    let rank = space.dim();
    DensityOperator::random(space, rank, &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid rank")
}

/// Transverse-field Ising chain at the critical field.
pub fn critical_ising(n: usize, open: bool) -> LocalHamiltonian {
    let spec = ModelSpec::new(ModelKind::TransverseIsing, n).with_field(1.0);
    build_model(&if open { spec.open() } else { spec }).expect("valid model")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_size() {
        assert_eq!(random_pure(3, 0).amplitudes().len(), 8);
        assert_eq!(random_mixed(2, 0).space().dim(), 4);
        assert_eq!(critical_ising(4, true).n_sites(), 4);
    }
}
