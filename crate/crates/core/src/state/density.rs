use faer::Mat;
use num_complex::Complex64 as c64;

use super::{Keep, PureState, RegionPartition, SiteSpace, State};
use crate::error::{arg, Error, Result};
use crate::linalg::{self, eigvalsh, hermiticity_residual, identity, kron, re, scale, trace, CMat, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Hermitian, positive-semidefinite, unit-trace operator over a [`SiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: SiteSpace,
    matrix: CMat,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(space: SiteSpace, matrix: CMat) -> Result<Self> {
        let rho = Self { space, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(space: SiteSpace, matrix: CMat) -> Self {
        Self { space, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.space.dim();
        if self.matrix.nrows() != n || self.matrix.ncols() != n {
            return arg(format!("matrix is {}x{} for dimension {n}", self.matrix.nrows(), self.matrix.ncols()));
        }
        let h = hermiticity_residual(&self.matrix);
        if h > HERMITIAN_TOL {
            return arg(format!("not Hermitian (residual {h:e})"));
        }
        let t = trace(&self.matrix);
        if (t - re(1.0)).norm() > TRACE_TOL {
            return arg(format!("trace {t} differs from 1"));
        }
        let min = eigvalsh(&self.matrix)?.into_iter().fold(f64::INFINITY, f64::min);
        if min < POSITIVITY_TOL {
            return arg(format!("negative eigenvalue {min:e}"));
        }
        Ok(())
    }

    /// G G† / tr(G G†) for a complex Ginibre G of the given rank
    /// (`rank` = dimension gives the Hilbert–Schmidt ensemble).
    pub fn random<R: rand::Rng + ?Sized>(space: SiteSpace, rank: usize, rng: &mut R) -> Result<Self> {
        let n = space.dim();
        if rank == 0 {
            return arg("rank must be at least 1");
        }
        let g = Mat::from_fn(n, rank, |_, _| linalg::complex_gaussian(rng));
        let m = &g * g.adjoint();
        let t = trace(&m).re;
        Ok(Self { matrix: linalg::hermitize(&scale(&m, re(1.0 / t))), space })
    }

    pub fn maximally_mixed(space: SiteSpace) -> Self {
        let n = space.dim();
        Self { matrix: scale(&identity(n), re(1.0 / n as f64)), space }
    }

    /// Σ p_i ρ_i over operators on the same space.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return arg("empty mixture");
        };
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return arg("mixture weights must be nonnegative and sum to 1");
        }
        let n = first.space.dim();
        let mut m = linalg::zeros(n, n);
        for (p, r) in parts {
            if r.space != first.space {
                return arg("mixture components live on different spaces");
            }
            m = &m + &scale(&r.matrix, re(*p));
        }
        Ok(Self { space: first.space.clone(), matrix: m })
    }

    /// ρ_A ⊗ ρ_B with concatenated site lists.
    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let space = self.space.concat(&other.space)?;
        Ok(Self { space, matrix: kron(&self.matrix, &other.matrix) })
    }

    /// (1 − p) 1/4 + p |Φ⁺⟩⟨Φ⁺| on two qubits.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return arg(format!("mixing weight {p} outside [0, 1]"));
        }
        let phi = PureState::phi_plus().to_density();
        let mixed = Self::maximally_mixed(phi.space.clone());
        Self::mixture(&[(1.0 - p, mixed), (p, phi)])
    }

    /// ½(|0,0⟩⟨0,0| + |1,1⟩⟨1,1|).
    pub fn classically_correlated() -> Self {
        let space = SiteSpace::new(vec![2, 2]).unwrap();
        Self { space, matrix: linalg::diag(&[0.5, 0.0, 0.0, 0.5]) }
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.matrix)
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }

    /// A ρ A† for an operator on the full space (not renormalized).
    pub fn conjugate_by(&self, op: &CMat) -> CMat {
        &(op * &self.matrix) * op.adjoint()
    }

    /// Reduced operator on `sites`, in the listed order.
    pub fn marginal(&self, sites: &[usize]) -> Result<DensityOperator> {
        let m = self.reduced_matrix(sites)?;
        Ok(Self { space: self.space.restrict(sites)?, matrix: m })
    }
}

impl State for DensityOperator {
    fn space(&self) -> &SiteSpace {
        &self.space
    }

    fn reduced_matrix(&self, sites: &[usize]) -> Result<CMat> {
        self.space.check_sites(sites)?;
        let rest: Vec<usize> = (0..self.space.n_sites()).filter(|s| !sites.contains(s)).collect();
        let ko = self.space.offsets(sites);
        let to = self.space.offsets(&rest);
        Ok(Mat::from_fn(ko.len(), ko.len(), |i, j| {
            let mut acc = ZERO;
            for &t in &to {
                acc += self.matrix[(ko[i] + t, ko[j] + t)];
            }
            acc
        }))
    }

    fn density(&self) -> DensityOperator {
        self.clone()
    }
}

/// Traces out one side of the partition.
pub fn partial_trace(rho: &DensityOperator, part: &RegionPartition, keep: Keep) -> Result<DensityOperator> {
    part.check(rho.space())?;
    rho.marginal(part.kept(keep))
}

/// Transposes the indices of region A:
/// ⟨a, b| ρ^{T_A} |a', b'⟩ = ⟨a', b| ρ |a, b'⟩.
pub fn partial_transpose(rho: &DensityOperator, part: &RegionPartition) -> Result<CMat> {
    part.check(rho.space())?;
    Ok(partial_transpose_matrix(rho.space(), rho.matrix(), part.region_a()))
}

pub(crate) fn partial_transpose_matrix(space: &SiteSpace, m: &CMat, region_a: &[usize]) -> CMat {
    let rest: Vec<usize> = (0..space.n_sites()).filter(|s| !region_a.contains(s)).collect();
    let ao = space.offsets(region_a);
    let bo = space.offsets(&rest);
    let n = space.dim();
    // Position of every flat index inside (A config, B config).
    let mut a_of = vec![0usize; n];
    let mut b_of = vec![0usize; n];
    for (ia, &oa) in ao.iter().enumerate() {
        for (ib, &ob) in bo.iter().enumerate() {
            a_of[oa + ob] = ia;
            b_of[oa + ob] = ib;
        }
    }
    Mat::from_fn(n, n, |i, j| {
        let (ai, bi) = (a_of[i], b_of[i]);
        let (aj, bj) = (a_of[j], b_of[j]);
        m[(ao[aj] + bo[bi], ao[ai] + bo[bj])]
    })
}

/// Lifts an operator on `sites` (first listed slowest) to the whole space.
pub fn embed_operator(space: &SiteSpace, op: &CMat, sites: &[usize]) -> Result<CMat> {
    space.check_sites(sites)?;
    let k = space.dim_of(sites);
    if op.nrows() != k || op.ncols() != k {
        return arg(format!("operator is {}x{} but the sites span {k}", op.nrows(), op.ncols()));
    }
    let rest: Vec<usize> = (0..space.n_sites()).filter(|s| !sites.contains(s)).collect();
    let ko = space.offsets(sites);
    let to = space.offsets(&rest);
    let n = space.dim();
    let mut out = linalg::zeros(n, n);
    for &t in &to {
        for (i, &oi) in ko.iter().enumerate() {
            for (j, &oj) in ko.iter().enumerate() {
                out[(oi + t, oj + t)] = op[(i, j)];
            }
        }
    }
    Ok(out)
}

/// tr(ρ O) with `observable` acting on `sites` and the identity elsewhere.
pub fn expectation<S: State + ?Sized>(state: &S, observable: &CMat, sites: &[usize]) -> Result<f64> {
    let h = hermiticity_residual(observable);
    if h > 1e-10 {
        return arg(format!("observable is not Hermitian (residual {h:e})"));
    }
    let k = state.space().dim_of(sites);
    if observable.nrows() != k {
        return arg(format!("observable is {}x{} but the sites span {k}", observable.nrows(), observable.ncols()));
    }
    let r = state.reduced_matrix(sites)?;
    let v: c64 = linalg::trace_product(&r, observable);
    if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
        return Err(Error::Numerical(format!("expectation has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, max_abs_diff};
    use crate::state::pauli::{sigma_x, sigma_z, Direction};

    fn two_qubit_split() -> RegionPartition {
        RegionPartition::chain(2, &[0]).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = PureState::phi_plus().to_density();
        let red = partial_trace(&rho, &two_qubit_split(), Keep::A).unwrap();
        assert!(max_abs_diff(red.matrix(), &diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn product_marginal_is_exact() {
        let a = DensityOperator::new(SiteSpace::new(vec![2]).unwrap(), diag(&[0.3, 0.7])).unwrap();
        let b = PureState::plus().to_density();
        let ab = a.tensor(&b).unwrap();
        let red = partial_trace(&ab, &two_qubit_split(), Keep::A).unwrap();
        assert!(max_abs_diff(red.matrix(), a.matrix()) < 1e-15);
        let red_b = partial_trace(&ab, &two_qubit_split(), Keep::B).unwrap();
        assert!(max_abs_diff(red_b.matrix(), b.matrix()) < 1e-15);
    }

    #[test]
    fn w_state_single_site_marginal() {
        // Oracle: ρ_1 = Σ over the other two sites of the three W amplitudes.
        let w = PureState::w(3).unwrap();
        let amps = w.amplitudes();
        let mut oracle = [[0.0f64; 2]; 2];
        for i in 0..8usize {
            for j in 0..8usize {
                if (i & 3) == (j & 3) {
                    oracle[i >> 2][j >> 2] += (amps[i] * amps[j].conj()).re;
                }
            }
        }
        assert!((oracle[0][0] - 2.0 / 3.0).abs() < 1e-15 && (oracle[1][1] - 1.0 / 3.0).abs() < 1e-15);
        let red = w.to_density().marginal(&[0]).unwrap();
        assert!((red.matrix()[(0, 0)].re - oracle[0][0]).abs() < 1e-15);
        assert!((red.matrix()[(1, 1)].re - oracle[1][1]).abs() < 1e-15);
        assert!(red.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = PureState::phi_plus().to_density();
        let pt = partial_transpose(&rho, &two_qubit_split()).unwrap();
        let mut ev = eigvalsh(&pt).unwrap();
        ev.sort_by(f64::total_cmp);
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_third_is_boundary() {
        let rho = DensityOperator::werner(1.0 / 3.0).unwrap();
        let pt = partial_transpose(&rho, &two_qubit_split()).unwrap();
        let min = eigvalsh(&pt).unwrap()[0];
        assert!(min.abs() < 1e-15, "{min}");
    }

    #[test]
    fn separable_state_stays_positive() {
        let rho = DensityOperator::mixture(&[
            (0.4, PureState::product(&[vec![re(1.0), re(0.0)], vec![re(0.6), re(0.8)]]).unwrap().to_density()),
            (0.6, PureState::product(&[vec![re(1.0), c64::new(0.0, 1.0)], vec![re(1.0), re(-1.0)]]).unwrap().to_density()),
        ])
        .unwrap();
        let pt = partial_transpose(&rho, &two_qubit_split()).unwrap();
        assert!(eigvalsh(&pt).unwrap()[0] > -1e-14);
    }

    #[test]
    fn correlations_of_bell_pair() {
        let phi = PureState::phi_plus();
        for (a, b) in [(0.3f64, 1.1f64), (2.0, -0.4), (0.0, std::f64::consts::FRAC_PI_2)] {
            let n = Direction::from_angle(a);
            let m = Direction::from_angle(b);
            let op = kron(&n.sigma(), &m.sigma());
            let v = expectation(&phi, &op, &[0, 1]).unwrap();
            assert!((v - n.dot(&m)).abs() < 1e-14);
            assert!(expectation(&phi, &n.sigma(), &[0]).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn classical_correlations() {
        let rho = DensityOperator::classically_correlated();
        let zz = kron(&sigma_z(), &sigma_z());
        assert!((expectation(&rho, &zz, &[0, 1]).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation(&rho, &sigma_z(), &[0]).unwrap().abs() < 1e-15);
        assert!(expectation(&rho, &sigma_z(), &[1]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let mut op = sigma_x();
        op[(0, 1)] = re(2.0);
        assert!(matches!(expectation(&PureState::plus(), &op, &[0]), Err(Error::Argument(_))));
    }

    #[test]
    fn validation_rejects_bad_operators() {
        let sp = SiteSpace::new(vec![2]).unwrap();
        assert!(DensityOperator::new(sp.clone(), diag(&[0.5, 0.4])).is_err());
        assert!(DensityOperator::new(sp.clone(), diag(&[1.2, -0.2])).is_err());
        assert!(DensityOperator::new(sp, sigma_x()).is_err());
    }
}
