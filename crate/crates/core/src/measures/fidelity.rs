use faer::Mat;
use num_complex::Complex64 as c64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Result};
use crate::linalg::{eigh, haar_unitary, identity, svd, trace, CMat};
use crate::state::{RegionPartition, State};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FidelityOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for FidelityOptions {
    fn default() -> Self {
        Self { restarts: 16, tol: 1e-10, max_iterations: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct FidelityResult {
    pub fidelity: f64,
    pub u: CMat,
    pub v: CMat,
    /// Restart that produced the maximum.
    pub restart: usize,
}

/// Weighted amplitude matrices of the state's eigen-ensemble.
fn ensemble<S: State + ?Sized>(state: &S, part: &RegionPartition) -> Result<Vec<(f64, CMat)>> {
    let rho = state.density();
    let space = rho.space();
    let (vals, vecs) = eigh(rho.matrix())?;
    let ao = space.offsets(part.region_a());
    let bo = space.offsets(part.region_b());
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 1e-14)
        .map(|(k, &l)| (l, Mat::from_fn(ao.len(), bo.len(), |a, b| vecs[(ao[a] + bo[b], k)])))
        .collect())
}

/// ⟨Φ⁺|(U⊗V) ρ (U⊗V)†|Φ⁺⟩ = (1/d) Σ λ_i |tr(U C_i Vᵀ)|².
fn objective(comps: &[(f64, CMat)], u: &CMat, v: &CMat, d: usize) -> f64 {
    comps
        .iter()
        .map(|(l, c)| l * trace(&(&(u * c) * v.transpose())).norm_sqr())
        .sum::<f64>()
        / d as f64
}

/// Unitary X maximizing Re tr(X G).
fn best_unitary(g: &CMat) -> Result<CMat> {
    let (w, _, y) = svd(g)?;
    Ok(&y * w.adjoint())
}

fn ascend(comps: &[(f64, CMat)], mut u: CMat, mut v: CMat, d: usize, opts: &FidelityOptions) -> Result<(f64, CMat, CMat)> {
    let mut f = objective(comps, &u, &v, d);
    for _ in 0..opts.max_iterations {
        // Minorize |z|² ≥ 2 Re(z̄₀ z) − |z₀|² and maximize exactly over U.
        let mut g = Mat::<c64>::zeros(d, d);
        for (l, c) in comps {
            let m = c * v.transpose();
            let z = trace(&(&u * &m));
            g = &g + &crate::linalg::scale(&m, z.conj() * *l);
        }
        u = best_unitary(&g)?;
        let mut g = Mat::<c64>::zeros(d, d);
        for (l, c) in comps {
            let h = (&u * c).transpose().to_owned();
            let z = trace(&(&v * &h));
            g = &g + &crate::linalg::scale(&h, z.conj() * *l);
        }
        v = best_unitary(&g)?;
        let next = objective(comps, &u, &v, d);
        let done = (next - f).abs() < opts.tol;
        f = next;
        if done {
            break;
        }
    }
    Ok((f, u, v))
}

/// Maximal fidelity with |Φ⁺⟩ = Σ|k,k⟩/√d over local unitaries U ⊗ V.
///
/// Alternating ascent from `restarts` starting pairs (restart 0 is the
/// identity pair, the rest are Haar-random from `seed`).
pub fn mes_fidelity<S: State + ?Sized>(state: &S, part: &RegionPartition, opts: FidelityOptions) -> Result<FidelityResult> {
    part.check(state.space())?;
    let da = state.space().dim_of(part.region_a());
    let db = state.space().dim_of(part.region_b());
    if da != db {
        return arg(format!("fidelity with a maximally entangled state needs equal local dimensions, got {da} and {db}"));
    }
    let d = da;
    let comps = ensemble(state, part)?;
    let restarts = opts.restarts.max(1);
    let runs: Vec<Result<(f64, CMat, CMat)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let (u, v) = if r == 0 {
                (identity(d), identity(d))
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
                (haar_unitary(d, &mut rng), haar_unitary(d, &mut rng))
            };
            ascend(&comps, u, v, d, &opts)
        })
        .collect();
    let mut best: Option<FidelityResult> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let (f, u, v) = run?;
        if best.as_ref().is_none_or(|b| f > b.fidelity) {
            best = Some(FidelityResult { fidelity: f.clamp(0.0, 1.0), u, v, restart: r });
        }
    }
    Ok(best.expect("at least one restart"))
}

/// (Σ_k d_k)²/d for a pure state.
pub fn mes_fidelity_closed_form(coefficients: &[f64], d: usize) -> f64 {
    let s: f64 = coefficients.iter().sum();
    s * s / d as f64
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use crate::measures::schmidt_decompose;
    use crate::state::{DensityOperator, PureState, SiteSpace};

    fn cut() -> RegionPartition {
        RegionPartition::chain(2, &[0]).unwrap()
    }

    #[test]
    fn anchors() {
        let o = FidelityOptions::default();
        assert!((mes_fidelity(&PureState::phi_plus(), &cut(), o).unwrap().fidelity - 1.0).abs() < 1e-10);
        let prod = PureState::product(&[vec![re(0.6), re(0.8)], vec![re(0.0), re(1.0)]]).unwrap();
        assert!((mes_fidelity(&prod, &cut(), o).unwrap().fidelity - 0.5).abs() < 1e-8);
        let t = 0.3;
        let f = mes_fidelity(&PureState::theta_state(t), &cut(), o).unwrap().fidelity;
        assert!((f - (t.cos() + t.sin()).powi(2) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn optimizer_matches_closed_form_on_qutrits() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = PureState::random(SiteSpace::new(vec![3, 3]).unwrap(), &mut rng);
        let sd = schmidt_decompose(&psi, &cut()).unwrap();
        let f = mes_fidelity(&psi, &cut(), FidelityOptions::default()).unwrap().fidelity;
        assert!((f - mes_fidelity_closed_form(&sd.coefficients, 3)).abs() < 1e-8);
    }

    #[test]
    fn werner_fidelity() {
        // For ρ(p) the optimum is the identity pair: (1 + 3p)/4.
        let p = 0.6;
        let f = mes_fidelity(&DensityOperator::werner(p).unwrap(), &cut(), FidelityOptions::default()).unwrap();
        assert!((f.fidelity - (1.0 + 3.0 * p) / 4.0).abs() < 1e-8);
    }

    #[test]
    fn unequal_dimensions_rejected() {
        let psi = PureState::basis(SiteSpace::new(vec![2, 3]).unwrap(), &[0, 0]).unwrap();
        assert!(mes_fidelity(&psi, &cut(), FidelityOptions::default()).is_err());
    }
}
