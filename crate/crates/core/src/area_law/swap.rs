use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::{eigvalsh, zeros, CMat, ONE, ZERO};
use crate::measures::renyi_from_spectrum;
use crate::state::{DensityOperator, RegionPartition, State};

/// Largest site count for the sampled estimator (it enumerates 2^N outcome strings).
pub const MAX_SAMPLED_SWAP_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SwapMode {
    Exact,
    Sampled { shots: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SwapPurity {
    pub value: f64,
    /// Standard error of the shot average in sampled mode.
    pub std_error: Option<f64>,
}

/// T = Σ |n, m⟩⟨m, n| on two d-level systems.
pub fn swap_matrix(d: usize) -> CMat {
    let mut t = zeros(d * d, d * d);
    for n in 0..d {
        for m in 0..d {
            t[(n * d + m, m * d + n)] = ONE;
        }
    }
    t
}

/// tr[(ρ ⊗ ρ) T_S] with T_S the product of per-site swaps between the two
/// copies on the sites of `mask` (bit k set = site k swapped).
fn swap_expectation(rho: &DensityOperator, mask: usize) -> f64 {
    let space = rho.space();
    let m = rho.matrix();
    let swapped: Vec<usize> = (0..space.n_sites()).filter(|k| mask >> k & 1 == 1).collect();
    let offsets = space.offsets(&swapped);
    let dim = space.dim();
    // Split each flat index into its swapped and untouched parts.
    let rest = space.offsets(&(0..space.n_sites()).filter(|k| mask >> k & 1 == 0).collect::<Vec<_>>());
    let mut part = vec![0usize; dim];
    for &o in &offsets {
        for &r in &rest {
            part[o + r] = o;
        }
    }
    let mut acc = ZERO;
    for i1 in 0..dim {
        let (s1, r1) = (part[i1], i1 - part[i1]);
        for i2 in 0..dim {
            let (s2, r2) = (part[i2], i2 - part[i2]);
            // ⟨i1 i2| ρ⊗ρ T_S |i1 i2⟩ = ρ[i1, r1 + s2] ρ[i2, r2 + s1].
            acc += m[(i1, r1 + s2)] * m[(i2, r2 + s1)];
        }
    }
    acc.re
}

/// tr ρ_S² for every subset S of sites, indexed by bitmask (bit k = site k).
pub fn subset_purities<S: State + ?Sized>(state: &S) -> Result<Vec<f64>> {
    let n = state.space().n_sites();
    let mut out = vec![1.0; 1 << n];
    for (mask, slot) in out.iter_mut().enumerate().skip(1) {
        let sites: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let r = state.reduced_matrix(&sites)?;
        let mut s = 0.0;
        for j in 0..r.ncols() {
            for i in 0..r.nrows() {
                s += r[(i, j)].norm_sqr();
            }
        }
        *slot = s;
    }
    Ok(out)
}

/// Purity tr ρ² from the swap operator on two copies.
///
/// Exact mode contracts ρ⊗ρ with the product of per-site swaps. Sampled
/// mode measures every per-site swap (eigenvalues ±1) on two copies, drawing
/// outcome strings from their exact joint distribution, and averages the
/// product of the outcomes.
pub fn purity_via_swap<S: State + ?Sized>(state: &S, mode: SwapMode) -> Result<SwapPurity> {
    let n = state.space().n_sites();
    match mode {
        SwapMode::Exact => {
            let rho = state.density();
            Ok(SwapPurity { value: swap_expectation(&rho, (1 << n) - 1), std_error: None })
        }
        SwapMode::Sampled { shots, seed } => {
            if shots < 1 {
                return arg("sampled swap mode needs shots ≥ 1");
            }
            if !state.space().is_qubits() {
                return arg("sampled swap mode needs qubit sites");
            }
            if n > MAX_SAMPLED_SWAP_SITES {
                return Err(Error::Capacity(format!("sampled swap mode supports at most {MAX_SAMPLED_SWAP_SITES} sites, got {n}")));
            }
            // P(s) = 2^{−N} Σ_S Π_{k∈S} s_k tr ρ_S², a Walsh-Hadamard transform.
            let mut p = subset_purities(state)?;
            let mut h = 1;
            while h < p.len() {
                for i in (0..p.len()).step_by(2 * h) {
                    for j in i..i + h {
                        let (a, b) = (p[j], p[j + h]);
                        p[j] = a + b;
                        p[j + h] = a - b;
                    }
                }
                h *= 2;
            }
            let scale = 1.0 / p.len() as f64;
            let weights: Vec<f64> = p.iter().map(|x| (x * scale).max(0.0)).collect();
            let dist = WeightedIndex::new(&weights).map_err(|e| Error::Numerical(format!("swap outcome distribution: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0i64;
            for _ in 0..shots {
                // Bit k of the index marks outcome −1 on site k.
                let minus = dist.sample(&mut rng);
                sum += if minus.count_ones() % 2 == 0 { 1 } else { -1 };
            }
            let mean = sum as f64 / shots as f64;
            Ok(SwapPurity { value: mean, std_error: Some(((1.0 - mean * mean).max(0.0) / shots as f64).sqrt()) })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Renyi2Report {
    pub from_spectrum: f64,
    pub from_swap: f64,
}

/// S₂ of region A from its spectrum and from the swap purity.
pub fn renyi2_block<S: State + ?Sized>(state: &S, part: &RegionPartition) -> Result<Renyi2Report> {
    part.check(state.space())?;
    let r = state.reduced_matrix(part.region_a())?;
    let from_spectrum = renyi_from_spectrum(&eigvalsh(&r)?, 2.0)?;
    let rho_a = DensityOperator::from_parts_unchecked(state.space().restrict(part.region_a())?, r);
    let purity = purity_via_swap(&rho_a, SwapMode::Exact)?.value;
    Ok(Renyi2Report { from_spectrum, from_swap: (-purity.log2()).max(0.0) })
}
