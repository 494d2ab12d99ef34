use proptest::prelude::*;
use qentangle_core::linalg::{haar_unitary, kron, trace_norm_hermitian};
use qentangle_core::measures::*;
use qentangle_core::state::PureState;
use qentangle_core::{DensityOperator, RegionPartition, SiteSpace, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mixed(n: usize, rng: &mut ChaCha8Rng) -> DensityOperator {
    let space = SiteSpace::qubits(n).unwrap();
    let rank = rng.random_range(1..=space.dim());
    DensityOperator::random(space, rank, rng).unwrap()
}

fn entropy_of(rho: &DensityOperator, sites: &[usize]) -> f64 {
    let m = rho.reduced_matrix(sites).unwrap();
    von_neumann_bits(&m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pure_state_entropy_is_symmetric(seed in 0u64..100_000, n in 2usize..7, cut in 1usize..6) {
        prop_assume!(cut < n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = PureState::random(SiteSpace::qubits(n).unwrap(), &mut rng);
        let a: Vec<usize> = (0..cut).collect();
        let b: Vec<usize> = (cut..n).collect();
        let sa = entanglement_entropy(&psi, &RegionPartition::chain(n, &a).unwrap()).unwrap();
        let sb = entanglement_entropy(&psi, &RegionPartition::chain(n, &b).unwrap()).unwrap();
        prop_assert!((sa - sb).abs() < 1e-10);
    }

    #[test]
    fn pinsker_sandwich_on_two_qubits(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_mixed(2, &mut rng);
        let part = RegionPartition::chain(2, &[0]).unwrap();
        let i = mutual_information(&rho, &part).unwrap();
        let dist = product_distance(&rho, &part).unwrap();
        prop_assert!(0.5 * dist * dist <= i + 1e-10);
        // d is the dimension of the joint space.
        prop_assert!(i <= 4f64.log2() * dist + 1e-10);
    }
}

#[test]
fn mutual_information_chain_on_two_hundred_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(265);
    for k in 0..200 {
        let rho = if k % 4 == 0 {
            PureState::random(SiteSpace::qubits(3).unwrap(), &mut rng).to_density()
        } else {
            random_mixed(3, &mut rng)
        };
        let i_ab = mutual_information_between(&rho, &[1], &[2]).unwrap();
        let i_aab = mutual_information_between(&rho, &[0, 1], &[2]).unwrap();
        let s_a = entropy_of(&rho, &[0]);
        assert!(i_ab <= i_aab + 1e-9);
        assert!(i_aab <= i_ab + 2.0 * s_a + 1e-9);
    }
}

#[test]
fn strong_subadditivity_on_hundred_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(267);
    for _ in 0..100 {
        let rho = random_mixed(3, &mut rng);
        let lhs = entropy_of(&rho, &[0, 1]) + entropy_of(&rho, &[0, 2]);
        let rhs = entropy_of(&rho, &[0, 1, 2]) + entropy_of(&rho, &[0]);
        assert!(lhs >= rhs - 1e-9);
    }
}

#[test]
fn negativity_is_local_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(268);
    let part = RegionPartition::chain(2, &[0]).unwrap();
    for _ in 0..20 {
        let rho = random_mixed(2, &mut rng);
        let u = kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let moved = DensityOperator::new(rho.space().clone(), rho.conjugate_by(&u)).unwrap();
        let a = negativity(&rho, &part).unwrap();
        let b = negativity(&moved, &part).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn concurrence_is_twice_schmidt_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(269);
    let part = RegionPartition::chain(2, &[0]).unwrap();
    for _ in 0..100 {
        let psi = PureState::random(SiteSpace::qubits(2).unwrap(), &mut rng);
        let d = schmidt_decompose(&psi, &part).unwrap().coefficients;
        let prod = if d.len() == 2 { d[0] * d[1] } else { 0.0 };
        assert!((concurrence_2q(&psi).unwrap() - 2.0 * prod).abs() < 1e-10);
    }
}

#[test]
fn optimized_fidelity_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(270);
    let part = RegionPartition::chain(2, &[0]).unwrap();
    for _ in 0..10 {
        let psi = PureState::random(SiteSpace::qubits(2).unwrap(), &mut rng);
        let d = schmidt_decompose(&psi, &part).unwrap().coefficients;
        let closed = mes_fidelity_closed_form(&d, 2);
        let opt = mes_fidelity(&psi, &part, FidelityOptions::default()).unwrap().fidelity;
        assert!((opt - closed).abs() < 1e-8);
    }
}

#[test]
fn localizable_entanglement_beats_all_z_measurements() {
    let mut rng = ChaCha8Rng::seed_from_u64(271);
    for _ in 0..3 {
        let psi = PureState::random(SiteSpace::qubits(4).unwrap(), &mut rng);
        let le = localizable_entanglement(&psi, (0, 3), LocalizableOptions::default()).unwrap();
        let all_z = localized_average(&psi, (0, 3), &[(0.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(le.value >= all_z - 1e-12);
    }
}

#[test]
fn trace_distance_of_product_state_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(272);
    let a = random_mixed(1, &mut rng);
    let b = random_mixed(1, &mut rng);
    let rho = a.tensor(&b).unwrap();
    let part = RegionPartition::chain(2, &[0]).unwrap();
    assert!(mutual_information(&rho, &part).unwrap().abs() < 1e-12);
    assert!(product_distance(&rho, &part).unwrap() < 1e-12);
    assert!(trace_norm_hermitian(rho.matrix()).unwrap() > 0.99);
}
