use faer::Mat;

use crate::error::{arg, Result};
use crate::linalg::{eigvalsh, shannon_bits, trace_norm_hermitian, CMat};
use crate::state::{DensityOperator, RegionPartition, SiteSpace, State};

fn entropy_of<S: State + ?Sized>(state: &S, sites: &[usize]) -> Result<f64> {
    Ok(shannon_bits(&eigvalsh(&state.reduced_matrix(sites)?)?))
}

/// I(A:B) = S_A + S_B − S_AB in bits, clamped at 0.
pub fn mutual_information(rho: &DensityOperator, part: &RegionPartition) -> Result<f64> {
    part.check(rho.space())?;
    let sa = entropy_of(rho, part.region_a())?;
    let sb = entropy_of(rho, part.region_b())?;
    let sab = shannon_bits(&rho.eigenvalues()?);
    Ok((sa + sb - sab).max(0.0))
}

/// I(A:B) between two disjoint site sets of any state; the remaining sites
/// are traced out.
pub fn mutual_information_between<S: State + ?Sized>(state: &S, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return arg("both regions must be nonempty");
    }
    if a.iter().any(|s| b.contains(s)) {
        return arg("regions overlap");
    }
    let mut ab = a.to_vec();
    ab.extend_from_slice(b);
    let sa = entropy_of(state, a)?;
    let sb = entropy_of(state, b)?;
    let sab = entropy_of(state, &ab)?;
    Ok((sa + sb - sab).max(0.0))
}

/// ρ_A ⊗ ρ_B laid out in the site order of `space`.
pub(crate) fn product_of_marginals(space: &SiteSpace, a: &[usize], rho_a: &CMat, b: &[usize], rho_b: &CMat) -> CMat {
    let ao = space.offsets(a);
    let bo = space.offsets(b);
    let n = space.dim();
    let mut a_of = vec![0usize; n];
    let mut b_of = vec![0usize; n];
    for (ia, &oa) in ao.iter().enumerate() {
        for (ib, &ob) in bo.iter().enumerate() {
            a_of[oa + ob] = ia;
            b_of[oa + ob] = ib;
        }
    }
    Mat::from_fn(n, n, |i, j| rho_a[(a_of[i], a_of[j])] * rho_b[(b_of[i], b_of[j])])
}

/// ‖ρ − ρ_A ⊗ ρ_B‖₁.
pub fn product_distance(rho: &DensityOperator, part: &RegionPartition) -> Result<f64> {
    part.check(rho.space())?;
    let ra = rho.reduced_matrix(part.region_a())?;
    let rb = rho.reduced_matrix(part.region_b())?;
    let prod = product_of_marginals(rho.space(), part.region_a(), &ra, part.region_b(), &rb);
    trace_norm_hermitian(&(rho.matrix() - &prod))
}
