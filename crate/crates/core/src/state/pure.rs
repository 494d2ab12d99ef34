use std::f64::consts::FRAC_1_SQRT_2;

use faer::Mat;
use num_complex::Complex64 as c64;
use rand::Rng;

use super::{DensityOperator, Keep, RegionPartition, SiteSpace, State};
use crate::error::{arg, Error, Result};
use crate::linalg::{complex_gaussian, inner, norm, re, CMat, ONE, ZERO};

const NORM_TOL: f64 = 1e-12;

/// Normalized state vector over a [`SiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: SiteSpace,
    amps: Vec<c64>,
}

impl PureState {
    /// Wraps an amplitude vector that is already normalized.
    pub fn new(space: SiteSpace, amps: Vec<c64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return arg(format!("{} amplitudes for dimension {}", amps.len(), space.dim()));
        }
        let n = norm(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return arg(format!("state norm {n} differs from 1 by more than {NORM_TOL:e}"));
        }
        Ok(Self { space, amps })
    }

    /// Normalizes `amps` first.
    pub fn normalized(space: SiteSpace, mut amps: Vec<c64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return arg(format!("{} amplitudes for dimension {}", amps.len(), space.dim()));
        }
        let n = norm(&amps);
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::DegenerateInput("zero-norm amplitude vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= n);
        Ok(Self { space, amps })
    }

    pub(crate) fn from_parts_unchecked(space: SiteSpace, amps: Vec<c64>) -> Self {
        Self { space, amps }
    }

    pub fn basis(space: SiteSpace, digits: &[usize]) -> Result<Self> {
        if digits.len() != space.n_sites() || digits.iter().zip(space.dims()).any(|(&d, &n)| d >= n) {
            return arg(format!("configuration {digits:?} does not fit {:?}", space.dims()));
        }
        let mut amps = vec![ZERO; space.dim()];
        amps[space.index_of(digits)] = ONE;
        Ok(Self { space, amps })
    }

    /// Product of single-site vectors (each normalized on the fly).
    pub fn product(locals: &[Vec<c64>]) -> Result<Self> {
        let states = locals
            .iter()
            .map(|v| Self::normalized(SiteSpace::new(vec![v.len()])?, v.clone()))
            .collect::<Result<Vec<_>>>()?;
        compose(&states)
    }

    pub fn qubit(a0: c64, a1: c64) -> Result<Self> {
        Self::normalized(SiteSpace::new(vec![2])?, vec![a0, a1])
    }

    /// (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        Self::from_parts_unchecked(SiteSpace::new(vec![2]).unwrap(), vec![re(FRAC_1_SQRT_2); 2])
    }

    fn two_qubit(amps: [f64; 4]) -> Self {
        Self::from_parts_unchecked(SiteSpace::new(vec![2, 2]).unwrap(), amps.iter().map(|&a| re(a)).collect())
    }

    pub fn phi_plus() -> Self {
        Self::two_qubit([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])
    }

    pub fn phi_minus() -> Self {
        Self::two_qubit([FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2])
    }

    pub fn psi_plus() -> Self {
        Self::two_qubit([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
    }

    /// Singlet (|0,1⟩ − |1,0⟩)/√2.
    pub fn psi_minus() -> Self {
        Self::two_qubit([0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
    }

    /// cos θ |0,0⟩ + sin θ |1,1⟩.
    pub fn theta_state(theta: f64) -> Self {
        Self::two_qubit([theta.cos(), 0.0, 0.0, theta.sin()])
    }

    /// (|0…0⟩ + |1…1⟩)/√2.
    pub fn ghz(n: usize) -> Result<Self> {
        let space = SiteSpace::qubits(n)?;
        let mut amps = vec![ZERO; space.dim()];
        amps[0] = re(FRAC_1_SQRT_2);
        amps[space.dim() - 1] = re(FRAC_1_SQRT_2);
        Ok(Self { space, amps })
    }

    /// Equal superposition of the single-excitation basis states.
    pub fn w(n: usize) -> Result<Self> {
        let space = SiteSpace::qubits(n)?;
        let mut amps = vec![ZERO; space.dim()];
        let a = re(1.0 / (n as f64).sqrt());
        for k in 0..n {
            amps[1 << k] = a;
        }
        Ok(Self { space, amps })
    }

    /// Haar-random state.
    pub fn random<R: Rng + ?Sized>(space: SiteSpace, rng: &mut R) -> Self {
        let amps = (0..space.dim()).map(|_| complex_gaussian(rng)).collect();
        Self::normalized(space, amps).expect("gaussian vector has nonzero norm")
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> c64 {
        self.amps[self.space.index_of(digits)]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn overlap(&self, other: &PureState) -> c64 {
        inner(&self.amps, &other.amps)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityOperator {
        let n = self.amps.len();
        let m = Mat::from_fn(n, n, |i, j| self.amps[i] * self.amps[j].conj());
        DensityOperator::from_parts_unchecked(self.space.clone(), m)
    }

    /// Amplitudes reshaped into a dim_A × dim_B matrix along the partition.
    pub fn amplitude_matrix(&self, part: &RegionPartition) -> Result<CMat> {
        part.check(&self.space)?;
        Ok(self.split_matrix(part.region_a(), part.region_b()))
    }

    pub(crate) fn split_matrix(&self, rows: &[usize], cols: &[usize]) -> CMat {
        let ro = self.space.offsets(rows);
        let co = self.space.offsets(cols);
        Mat::from_fn(ro.len(), co.len(), |i, j| self.amps[ro[i] + co[j]])
    }

    /// Applies `op` to the listed sites (first listed slowest). The result is
    /// not renormalized.
    pub fn apply_local(&self, op: &CMat, sites: &[usize]) -> Result<Vec<c64>> {
        self.space.check_sites(sites)?;
        let k = self.space.dim_of(sites);
        if op.nrows() != k || op.ncols() != k {
            return arg(format!("operator is {}x{} but the sites span {k}", op.nrows(), op.ncols()));
        }
        let rest: Vec<usize> = (0..self.space.n_sites()).filter(|s| !sites.contains(s)).collect();
        let ko = self.space.offsets(sites);
        let to = self.space.offsets(&rest);
        let mut out = vec![ZERO; self.amps.len()];
        let mut buf = vec![ZERO; k];
        for &t in &to {
            for (b, &o) in buf.iter_mut().zip(&ko) {
                *b = self.amps[o + t];
            }
            for (i, &oi) in ko.iter().enumerate() {
                let mut acc = ZERO;
                for (j, b) in buf.iter().enumerate() {
                    acc += op[(i, j)] * b;
                }
                out[oi + t] = acc;
            }
        }
        Ok(out)
    }

    /// Reduced density matrix of one side of a partition.
    pub fn reduce(&self, part: &RegionPartition, keep: Keep) -> Result<DensityOperator> {
        part.check(&self.space)?;
        let sites = part.kept(keep);
        let m = self.reduced_matrix(sites)?;
        Ok(DensityOperator::from_parts_unchecked(self.space.restrict(sites)?, m))
    }

    /// Keeps `sites` in the listed order and discards the rest.
    pub fn marginal(&self, sites: &[usize]) -> Result<DensityOperator> {
        let m = self.reduced_matrix(sites)?;
        Ok(DensityOperator::from_parts_unchecked(self.space.restrict(sites)?, m))
    }
}

impl State for PureState {
    fn space(&self) -> &SiteSpace {
        &self.space
    }

    fn reduced_matrix(&self, sites: &[usize]) -> Result<CMat> {
        self.space.check_sites(sites)?;
        let rest: Vec<usize> = (0..self.space.n_sites()).filter(|s| !sites.contains(s)).collect();
        let c = self.split_matrix(sites, &rest);
        Ok(&c * c.adjoint())
    }

    fn density(&self) -> DensityOperator {
        self.to_density()
    }
}

/// Tensor product in site order.
pub fn compose(states: &[PureState]) -> Result<PureState> {
    let Some(first) = states.first() else {
        return arg("compose needs at least one state");
    };
    let mut dims = first.space.dims().to_vec();
    let mut amps = first.amps.clone();
    for s in &states[1..] {
        dims.extend_from_slice(s.space.dims());
        // Validate capacity before allocating.
        SiteSpace::new(dims.clone())?;
        let mut next = Vec::with_capacity(amps.len() * s.amps.len());
        for a in &amps {
            for b in &s.amps {
                next.push(a * b);
            }
        }
        amps = next;
    }
    let space = SiteSpace::new(dims)?;
    PureState::new(space, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bit: usize) -> PureState {
        PureState::basis(SiteSpace::new(vec![2]).unwrap(), &[bit]).unwrap()
    }

    #[test]
    fn compose_basis_states() {
        let s = compose(&[ket(0), ket(1)]).unwrap();
        assert_eq!(s.amplitudes()[1], ONE);
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn compose_plus_states_is_uniform() {
        let s = compose(&[PureState::plus(), PureState::plus()]).unwrap();
        for a in s.amplitudes() {
            assert!((a - re(0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn compose_fourteen_qubits() {
        let parts: Vec<_> = (0..14)
            .map(|k| PureState::qubit(re((k as f64 * 0.3).cos()), c64::new(0.0, (k as f64 * 0.3).sin())).unwrap())
            .collect();
        let s = compose(&parts).unwrap();
        assert_eq!(s.amplitudes().len(), 16384);
        let direct: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compose_rejects_over_cap() {
        let parts: Vec<_> = (0..21).map(|_| PureState::plus()).collect();
        assert!(matches!(compose(&parts), Err(Error::Capacity(_))));
    }

    #[test]
    fn unnormalized_input_rejected() {
        let sp = SiteSpace::new(vec![2]).unwrap();
        assert!(PureState::new(sp.clone(), vec![ONE, ONE]).is_err());
        assert!(matches!(PureState::normalized(sp, vec![ZERO, ZERO]), Err(Error::DegenerateInput(_))));
    }
}
