//! Matrix product states and the local maps that build them.

use num_complex::Complex64 as c64;
use rand::Rng;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::{complex_gaussian, identity, zeros, CMat};
use crate::state::{PureState, SiteSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MpsBoundary {
    /// D_0 = D_N = 1 and amplitudes are the scalar matrix product.
    Open,
    /// Amplitudes are the trace of the matrix product.
    Periodic,
}

impl MpsBoundary {
    pub fn name(self) -> &'static str {
        match self {
            MpsBoundary::Open => "open",
            MpsBoundary::Periodic => "periodic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    None,
    /// Σ_n A^n† A^n = 1 at every site.
    LeftCanonical,
}

impl Gauge {
    pub fn name(self) -> &'static str {
        match self {
            Gauge::None => "none",
            Gauge::LeftCanonical => "left-canonical",
        }
    }
}

/// Residual above which a left-canonical flag is rejected.
pub const GAUGE_TOL: f64 = 1e-10;

/// `tensors[m][n]` is the D_m × D_{m+1} matrix A^n[m].
#[derive(Debug, Clone)]
pub struct MpsState {
    d: usize,
    tensors: Vec<Vec<CMat>>,
    boundary: MpsBoundary,
    gauge: Gauge,
}

impl MpsState {
    /// Checks shapes and bond consistency; the gauge flag starts as none.
    pub fn new(tensors: Vec<Vec<CMat>>, boundary: MpsBoundary) -> Result<Self> {
        let n = tensors.len();
        if n == 0 {
            return arg("an MPS needs at least one site");
        }
        let d = tensors[0].len();
        if d < 2 {
            return arg(format!("physical dimension {d} < 2"));
        }
        for (m, site) in tensors.iter().enumerate() {
            if site.len() != d {
                return arg(format!("site {m} has {} physical matrices, expected {d}", site.len()));
            }
            let (r, c) = (site[0].nrows(), site[0].ncols());
            if r == 0 || c == 0 {
                return arg(format!("site {m} has an empty bond"));
            }
            if site.iter().any(|a| a.nrows() != r || a.ncols() != c) {
                return arg(format!("site {m} mixes matrix shapes"));
            }
        }
        for m in 0..n {
            let right = tensors[m][0].ncols();
            let next = (m + 1) % n;
            if m + 1 == n && boundary == MpsBoundary::Open {
                break;
            }
            let left = tensors[next][0].nrows();
            if right != left {
                return arg(format!("bond {m}|{next}: {right} columns against {left} rows"));
            }
        }
        if boundary == MpsBoundary::Open && (tensors[0][0].nrows() != 1 || tensors[n - 1][0].ncols() != 1) {
            return arg("open boundary needs end bonds of dimension 1");
        }
        Ok(Self { d, tensors, boundary, gauge: Gauge::None })
    }

    /// Random complex Gaussian tensors with bond dimension `bond` (open
    /// chains clip it to the largest useful value at each cut).
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, bond: usize, boundary: MpsBoundary, rng: &mut R) -> Result<Self> {
        if n == 0 || bond == 0 {
            return arg("random MPS needs n ≥ 1 and D ≥ 1");
        }
        let dims = match boundary {
            MpsBoundary::Periodic => vec![bond; n + 1],
            MpsBoundary::Open => open_bond_dims(n, d, bond),
        };
        let tensors = (0..n)
            .map(|m| (0..d).map(|_| CMat::from_fn(dims[m], dims[m + 1], |_, _| complex_gaussian(rng))).collect())
            .collect();
        Self::new(tensors, boundary)
    }

    /// Site-independent tensors repeated over `n` sites.
    pub fn translation_invariant(site: Vec<CMat>, n: usize, boundary: MpsBoundary) -> Result<Self> {
        Self::new(vec![site; n], boundary)
    }

    pub(crate) fn with_gauge(mut self, gauge: Gauge) -> Self {
        self.gauge = gauge;
        self
    }

    /// Sets the left-canonical flag after verifying the condition.
    pub fn mark_left_canonical(self) -> Result<Self> {
        let worst = gauge_residuals(&self).into_iter().fold(0.0, f64::max);
        if self.boundary != MpsBoundary::Open || worst > GAUGE_TOL {
            return Err(Error::Numerical(format!("not left-canonical (residual {worst:e})")));
        }
        Ok(self.with_gauge(Gauge::LeftCanonical))
    }

    pub fn n_sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn phys_dim(&self) -> usize {
        self.d
    }

    pub fn boundary(&self) -> MpsBoundary {
        self.boundary
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn tensors(&self) -> &[Vec<CMat>] {
        &self.tensors
    }

    pub fn site(&self, m: usize) -> &[CMat] {
        &self.tensors[m]
    }

    pub(crate) fn site_mut(&mut self, m: usize) -> &mut Vec<CMat> {
        self.gauge = Gauge::None;
        &mut self.tensors[m]
    }

    /// Left bond dimension of every site followed by the last right bond.
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.tensors.iter().map(|s| s[0].nrows()).collect();
        dims.push(self.tensors[self.n_sites() - 1][0].ncols());
        dims
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Number of complex parameters Σ_m d·D_m·D_{m+1}; N·d·D² for uniform D.
    pub fn n_parameters(&self) -> usize {
        self.tensors.iter().map(|s| self.d * s[0].nrows() * s[0].ncols()).sum()
    }

    /// Applies A^n[m] → X_m A^n[m] X_{m+1}⁻¹ given the bond matrices and
    /// their inverses (`xs[m]` sits on the left bond of site m).
    pub fn gauge_transformed(&self, xs: &[CMat], xs_inv: &[CMat]) -> Result<Self> {
        let n = self.n_sites();
        let needed = if self.boundary == MpsBoundary::Periodic { n } else { n + 1 };
        if xs.len() != needed || xs_inv.len() != needed {
            return arg(format!("expected {needed} bond matrices"));
        }
        let right = |m: usize| if self.boundary == MpsBoundary::Periodic { (m + 1) % n } else { m + 1 };
        let tensors = (0..n)
            .map(|m| {
                self.tensors[m]
                    .iter()
                    .map(|a| &(&xs[m] * a) * &xs_inv[right(m)])
                    .collect()
            })
            .collect();
        Self::new(tensors, self.boundary)
    }
}

/// Bond dimensions min(D, d^m, d^{N−m}) of a full open chain.
pub(crate) fn open_bond_dims(n: usize, d: usize, bond: usize) -> Vec<usize> {
    let cap = |k: usize| -> usize {
        let mut v = 1usize;
        for _ in 0..k {
            v = v.saturating_mul(d);
            if v >= bond {
                return bond;
            }
        }
        v
    };
    (0..=n).map(|m| cap(m).min(cap(n - m))).collect()
}

/// ‖Σ_n A^n†A^n − 1‖ (largest entry) at every site.
pub fn gauge_residuals(mps: &MpsState) -> Vec<f64> {
    mps.tensors
        .iter()
        .map(|site| {
            let dr = site[0].ncols();
            let mut acc = zeros(dr, dr);
            for a in site {
                acc += a.adjoint() * a;
            }
            crate::linalg::max_abs_diff(&acc, &identity(dr))
        })
        .collect()
}

/// The map P = Σ A^i_{αβ} |i⟩⟨α,β| taking two auxiliary systems to one site.
#[derive(Debug, Clone)]
pub struct SiteMap {
    p: CMat,
    dl: usize,
    dr: usize,
}

impl SiteMap {
    /// `p` is d × (dl·dr) with column α·dr + β.
    pub fn new(p: CMat, dl: usize, dr: usize) -> Result<Self> {
        if p.ncols() != dl * dr || dl == 0 || dr == 0 {
            return arg(format!("map has {} columns, expected {dl}·{dr}", p.ncols()));
        }
        for j in 0..p.ncols() {
            for i in 0..p.nrows() {
                let v = p[(i, j)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return arg(format!("map entry ({i}, {j}) is not finite"));
                }
            }
        }
        Ok(Self { p, dl, dr })
    }

    /// Square auxiliary dimension D with D² columns.
    pub fn uniform(p: CMat) -> Result<Self> {
        let dd = p.ncols();
        let bond = (dd as f64).sqrt().round() as usize;
        if bond * bond != dd {
            return arg(format!("{dd} columns is not a square"));
        }
        Self::new(p, bond, bond)
    }

    /// Map whose coefficients are the given matrices A^i.
    pub fn from_matrices(mats: &[CMat]) -> Result<Self> {
        let (dl, dr) = mats.first().map(|a| (a.nrows(), a.ncols())).ok_or_else(|| Error::Argument("no matrices".into()))?;
        if mats.iter().any(|a| a.nrows() != dl || a.ncols() != dr) {
            return arg("matrices differ in shape");
        }
        Self::new(CMat::from_fn(mats.len(), dl * dr, |i, j| mats[i][(j / dr, j % dr)]), dl, dr)
    }

    /// P = |0⟩⟨0,0| + |1⟩⟨1,1|, whose periodic chain is the GHZ state.
    pub fn ghz() -> Self {
        let mut p = zeros(2, 4);
        p[(0, 0)] = c64::new(1.0, 0.0);
        p[(1, 3)] = c64::new(1.0, 0.0);
        Self { p, dl: 2, dr: 2 }
    }

    pub fn matrix(&self) -> &CMat {
        &self.p
    }

    pub fn phys_dim(&self) -> usize {
        self.p.nrows()
    }

    pub fn bonds(&self) -> (usize, usize) {
        (self.dl, self.dr)
    }

    /// A^i_{αβ} = P[i, α·dr + β].
    pub fn tensor(&self) -> Vec<CMat> {
        (0..self.p.nrows())
            .map(|i| CMat::from_fn(self.dl, self.dr, |a, b| self.p[(i, a * self.dr + b)]))
            .collect()
    }
}

/// Reads each site tensor off its map.
pub fn mps_from_maps(maps: &[SiteMap], boundary: MpsBoundary) -> Result<MpsState> {
    if let Some(first) = maps.first() {
        if maps.iter().any(|m| m.phys_dim() != first.phys_dim()) {
            return arg("maps differ in physical dimension");
        }
    }
    MpsState::new(maps.iter().map(SiteMap::tensor).collect(), boundary)
}

fn check_configuration(mps: &MpsState, configuration: &[usize]) -> Result<()> {
    if configuration.len() != mps.n_sites() {
        return arg(format!("configuration has {} entries for {} sites", configuration.len(), mps.n_sites()));
    }
    if let Some(&x) = configuration.iter().find(|&&x| x >= mps.d) {
        return arg(format!("outcome {x} ≥ d = {}", mps.d));
    }
    Ok(())
}

/// tr or scalar of A^{n_1}[1] ⋯ A^{n_N}[N].
pub fn mps_amplitude(mps: &MpsState, configuration: &[usize]) -> Result<c64> {
    check_configuration(mps, configuration)?;
    let mut acc = mps.tensors[0][configuration[0]].clone();
    for (m, &n) in configuration.iter().enumerate().skip(1) {
        acc = &acc * &mps.tensors[m][n];
    }
    Ok((0..acc.nrows().min(acc.ncols())).map(|i| acc[(i, i)]).sum())
}

/// Unnormalized amplitudes of every configuration, site 0 slowest.
pub(crate) fn dense_amplitudes(mps: &MpsState) -> Result<Vec<c64>> {
    let d = mps.d;
    let n = mps.n_sites();
    let d0 = mps.tensors[0][0].nrows();
    SiteSpace::new(vec![d; n])?;
    // Rows (prefix, α_0), columns α_m.
    let mut cur = identity(d0);
    let mut prefixes = 1usize;
    for site in &mps.tensors {
        let dr = site[0].ncols();
        let mut next = zeros(prefixes * d * d0, dr);
        for (k, a) in site.iter().enumerate() {
            let block = &cur * a;
            for p in 0..prefixes {
                for a0 in 0..d0 {
                    let src = p * d0 + a0;
                    let dst = (p * d + k) * d0 + a0;
                    for b in 0..dr {
                        next[(dst, b)] = block[(src, b)];
                    }
                }
            }
        }
        cur = next;
        prefixes *= d;
    }
    // D_N = D_0 for both boundaries, so the closure is a trace over α_0.
    Ok((0..prefixes).map(|p| (0..d0).map(|a0| cur[(p * d0 + a0, a0)]).sum()).collect())
}

/// Normalized dense state; a vanishing norm is a degenerate input.
pub fn mps_to_dense(mps: &MpsState) -> Result<PureState> {
    let amps = dense_amplitudes(mps)?;
    PureState::normalized(SiteSpace::new(vec![mps.d; mps.n_sites()])?, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{re, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ghz_map_gives_ghz_state() {
        for n in [3, 4, 6] {
            let mps = mps_from_maps(&vec![SiteMap::ghz(); n], MpsBoundary::Periodic).unwrap();
            let psi = mps_to_dense(&mps).unwrap();
            let ghz = PureState::ghz(n).unwrap();
            assert!((psi.fidelity(&ghz) - 1.0).abs() < 1e-12);
            let zeros_amp = mps_amplitude(&mps, &vec![0; n]).unwrap();
            let ones_amp = mps_amplitude(&mps, &vec![1; n]).unwrap();
            assert_eq!(zeros_amp, ones_amp);
        }
        let mps = mps_from_maps(&vec![SiteMap::ghz(); 4], MpsBoundary::Periodic).unwrap();
        assert_eq!(mps_amplitude(&mps, &[0, 1, 0, 1]).unwrap(), ZERO);
    }

    #[test]
    fn bond_one_maps_give_product_state() {
        let plus = SiteMap::new(CMat::from_fn(2, 1, |_, _| re(1.0)), 1, 1).unwrap();
        let mps = mps_from_maps(&vec![plus; 4], MpsBoundary::Open).unwrap();
        let psi = mps_to_dense(&mps).unwrap();
        for a in psi.amplitudes() {
            assert!((a.re - 0.25).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn amplitudes_match_dense_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for boundary in [MpsBoundary::Open, MpsBoundary::Periodic] {
            let mps = MpsState::random(8, 2, 4, boundary, &mut rng).unwrap();
            let amps = dense_amplitudes(&mps).unwrap();
            let space = SiteSpace::qubits(8).unwrap();
            for (i, a) in amps.iter().enumerate() {
                let b = mps_amplitude(&mps, &space.digits(i)).unwrap();
                assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn inconsistent_bonds_are_rejected() {
        let a = SiteMap::uniform(zeros(2, 4)).unwrap();
        let b = SiteMap::uniform(zeros(2, 9)).unwrap();
        assert!(matches!(mps_from_maps(&[a.clone(), b], MpsBoundary::Periodic), Err(Error::Argument(_))));
        assert!(matches!(mps_from_maps(&[a.clone(), a], MpsBoundary::Open), Err(Error::Argument(_))));
        assert!(SiteMap::uniform(zeros(2, 3)).is_err());
    }

    #[test]
    fn parameter_count_is_n_d_d_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mps = MpsState::random(7, 3, 5, MpsBoundary::Periodic, &mut rng).unwrap();
        assert_eq!(mps.n_parameters(), 7 * 3 * 25);
        let open = MpsState::random(6, 2, 4, MpsBoundary::Open, &mut rng).unwrap();
        assert_eq!(open.bond_dims(), vec![1, 2, 4, 4, 4, 2, 1]);
    }

    #[test]
    fn zero_state_is_degenerate() {
        let z = SiteMap::uniform(zeros(2, 4)).unwrap();
        let mps = mps_from_maps(&vec![z; 3], MpsBoundary::Periodic).unwrap();
        assert!(matches!(mps_to_dense(&mps), Err(Error::DegenerateInput(_))));
    }
}
