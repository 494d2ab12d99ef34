use num_complex::Complex64 as c64;
use proptest::prelude::*;
use qentangle_core::linalg::{complex_gaussian, identity, inverse, CMat};
use qentangle_core::models::{build_model, dimer_state, ground_state, ModelKind, ModelSpec};
use qentangle_core::mps::*;
use qentangle_core::state::{PureState, SiteSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_invertible(k: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(k, k, |i, j| complex_gaussian(rng) * 0.4 + if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
}

#[test]
fn periodic_gauge_transform_keeps_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mps = MpsState::random(6, 2, 3, MpsBoundary::Periodic, &mut rng).unwrap();
    let xs: Vec<CMat> = (0..6).map(|_| random_invertible(3, &mut rng)).collect();
    let inv: Vec<CMat> = xs.iter().map(inverse).collect();
    let moved = mps.gauge_transformed(&xs, &inv).unwrap();
    let space = SiteSpace::qubits(6).unwrap();
    for i in 0..space.dim() {
        let cfg = space.digits(i);
        let a = mps_amplitude(&mps, &cfg).unwrap();
        let b = mps_amplitude(&moved, &cfg).unwrap();
        assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
    }
}

#[test]
fn dimer_ground_vector_compresses_to_bond_three() {
    let h = build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 8)).unwrap();
    let spec = ground_state(&h).unwrap();
    // Project the dimer covering onto the exact ground space.
    let dimer = dimer_state(8, 0).unwrap();
    let mut proj = vec![c64::new(0.0, 0.0); dimer.amplitudes().len()];
    for v in &spec.ground_vectors {
        let c = v.overlap(&dimer);
        for (p, a) in proj.iter_mut().zip(v.amplitudes()) {
            *p += c * a;
        }
    }
    let exact = PureState::normalized(dimer.space().clone(), proj).unwrap();
    assert!(exact.fidelity(&dimer) > 1.0 - 1e-10);
    let c = dense_to_mps(&exact, 3, 1e-12).unwrap();
    assert!(c.mps.max_bond() <= 3);
    let back = mps_to_dense(&c.mps).unwrap();
    let phase = back.overlap(&exact);
    let phase = phase / phase.norm();
    for (a, b) in back.amplitudes().iter().zip(exact.amplitudes()) {
        assert!((a * phase.conj() - b).norm() < 1e-8);
    }
}

#[test]
fn variational_majumdar_ghosh_twelve_sites_blocked() {
    let h = build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 12)).unwrap();
    let opts = VariationalOptions { bond_dim: 8, block: 2, ..Default::default() };
    let res = variational_ground_search(&h, &opts).unwrap();
    assert!((res.energy + 4.5).abs() < 1e-8, "{}", res.energy);
    assert!(res.energies.windows(2).all(|w| w[1] <= w[0] + 1e-10));
}

#[test]
fn variational_energy_never_undercuts_exact() {
    for (b, d) in [(0.5, 2), (1.0, 3), (2.0, 4)] {
        let h = build_model(&ModelSpec::new(ModelKind::TransverseIsing, 8).with_field(b).open()).unwrap();
        let exact = ground_state(&h).unwrap().ground_energy;
        let res = variational_ground_search(&h, &VariationalOptions { bond_dim: d, ..Default::default() }).unwrap();
        assert!(res.energy >= exact - 1e-10, "B = {b}, D = {d}");
        assert!(res.energies.windows(2).all(|w| w[1] <= w[0] + 1e-10));
    }
}

#[test]
fn product_ansatz_bounds_strong_field_energy() {
    let h = build_model(&ModelSpec::new(ModelKind::TransverseIsing, 8).with_field(50.0).open()).unwrap();
    let exact = ground_state(&h).unwrap().ground_energy;
    let res = variational_ground_search(&h, &VariationalOptions { bond_dim: 1, ..Default::default() }).unwrap();
    assert!((res.energy + 8.0 * 50.0).abs() < 1e-6);
    assert!(exact <= res.energy);
    // Second order: each of the 7 bonds lowers the energy by 1/(4B).
    assert!(res.energy - exact < 7.0 / (4.0 * 50.0) * 1.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonicalization_is_idempotent_and_normalizing(seed in 0u64..10_000, n in 2usize..7, bond in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mps = MpsState::random(n, 2, bond, MpsBoundary::Open, &mut rng).unwrap();
        let a = left_canonicalize(&mps).unwrap();
        prop_assert!(gauge_residuals(&a).iter().all(|&r| r < 1e-12));
        prop_assert!((mps_norm_squared(&a) - 1.0).abs() < 1e-12);
        let b = left_canonicalize(&a).unwrap();
        for m in 0..n {
            for (x, y) in a.site(m).iter().zip(b.site(m)) {
                prop_assert!(qentangle_core::linalg::max_abs_diff(x, y) < 1e-12);
            }
        }
    }

    #[test]
    fn full_rank_compression_round_trips(seed in 0u64..10_000, n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = PureState::random(SiteSpace::qubits(n).unwrap(), &mut rng);
        let c = dense_to_mps(&psi, 1 << (n / 2), 0.0).unwrap();
        prop_assert!(c.discarded_weight < 1e-24);
        prop_assert!(mps_to_dense(&c.mps).unwrap().fidelity(&psi) > 1.0 - 1e-12);
    }

    #[test]
    fn unit_gauge_transform_is_identity(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mps = MpsState::random(4, 2, 2, MpsBoundary::Periodic, &mut rng).unwrap();
        let xs = vec![identity(2); 4];
        let moved = mps.gauge_transformed(&xs, &xs).unwrap();
        prop_assert!((mps_amplitude(&moved, &[0, 1, 1, 0]).unwrap() - mps_amplitude(&mps, &[0, 1, 1, 0]).unwrap()).norm() < 1e-14);
    }
}
