use proptest::prelude::*;
use qentangle_core::linalg::{haar_unitary, hermiticity_residual, max_abs_diff, scale, trace, CMat};
use qentangle_core::state::pauli::{sigma_x, sigma_z};
use qentangle_core::state::{apply_measurement, expectation, partial_trace, partial_transpose, KrausSet, Selection};
use qentangle_core::{DensityOperator, Keep, RegionPartition, SiteSpace, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_rho(n: usize, seed: u64) -> DensityOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = SiteSpace::qubits(n).unwrap();
    let dim = space.dim();
    DensityOperator::random(space, 1 + (seed as usize) % dim, &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_traces_compose(seed in 0u64..100_000) {
        let rho = random_rho(4, seed);
        // Trace out {3}, then {2} from what is left, against tracing {2, 3} at once.
        let step = partial_trace(&rho, &RegionPartition::chain(4, &[0, 1, 2]).unwrap(), Keep::A).unwrap();
        let step = partial_trace(&step, &RegionPartition::chain(3, &[0, 1]).unwrap(), Keep::A).unwrap();
        let once = partial_trace(&rho, &RegionPartition::chain(4, &[0, 1]).unwrap(), Keep::A).unwrap();
        prop_assert!(max_abs_diff(step.matrix(), once.matrix()) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution_preserving_trace(seed in 0u64..100_000) {
        let rho = random_rho(3, seed);
        let part = RegionPartition::chain(3, &[1]).unwrap();
        let pt = partial_transpose(&rho, &part).unwrap();
        prop_assert!(hermiticity_residual(&pt) < 1e-15);
        prop_assert!((trace(&pt).re - 1.0).abs() < 1e-12);
        // Mixing with the identity keeps the partial transpose positive, so
        // it can be transposed again as a state.
        let mixed = DensityOperator::mixture(&[(0.9, DensityOperator::maximally_mixed(rho.space().clone())), (0.1, rho)]).unwrap();
        let once = DensityOperator::new(mixed.space().clone(), partial_transpose(&mixed, &part).unwrap()).unwrap();
        let twice = partial_transpose(&once, &part).unwrap();
        prop_assert!(max_abs_diff(&twice, mixed.matrix()) < 1e-15);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_rho(2, seed);
        // Projective measurement in a random local basis on site 1.
        let u = haar_unitary(2, &mut rng);
        let proj = |k: usize| CMat::from_fn(2, 2, |i, j| u[(i, k)] * u[(j, k)].conj());
        let set = KrausSet::unlabeled(vec![proj(0), proj(1)]).unwrap().embed(rho.space(), &[1]).unwrap();
        let mut total = 0.0;
        for k in 0..2 {
            if let Ok(o) = apply_measurement(&rho, &set, Selection::Forced(k)) {
                total += o.probability;
                prop_assert!(o.post.validate().is_ok());
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn expectation_is_linear_and_real(seed in 0u64..100_000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let rho = random_rho(2, seed);
        let combo = &scale(&sigma_x(), qentangle_core::linalg::re(a)) + &scale(&sigma_z(), qentangle_core::linalg::re(b));
        let lhs = expectation(&rho, &combo, &[0]).unwrap();
        let rhs = a * expectation(&rho, &sigma_x(), &[0]).unwrap() + b * expectation(&rho, &sigma_z(), &[0]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
        let r = rho.reduced_matrix(&[0]).unwrap();
        let im = qentangle_core::linalg::trace_product(&r, &combo).im;
        prop_assert!(im.abs() < 1e-12);
    }
}

#[test]
fn partial_transpose_of_hundred_random_states_keeps_hermiticity_and_trace() {
    for seed in 0..100 {
        let rho = random_rho(2 + (seed % 3) as usize, seed);
        let n = rho.space().n_sites();
        let pt = partial_transpose(&rho, &RegionPartition::chain(n, &[0]).unwrap()).unwrap();
        assert!(hermiticity_residual(&pt) < 1e-14);
        assert!((trace(&pt).re - 1.0).abs() < 1e-12);
    }
}
