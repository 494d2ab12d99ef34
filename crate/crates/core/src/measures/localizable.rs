//! Localizable entanglement: the best average pair entanglement reachable by
//! local projective measurements on every other qubit.

use std::f64::consts::PI;

use num_complex::Complex64 as c64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::shannon_bits;
use crate::state::PureState;

pub const MAX_LOCALIZABLE_SITES: usize = 8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalizableOptions {
    pub theta_points: usize,
    pub phi_points: usize,
    pub refinements: usize,
    pub max_sweeps: usize,
}

impl Default for LocalizableOptions {
    fn default() -> Self {
        Self { theta_points: 12, phi_points: 24, refinements: 3, max_sweeps: 20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizableResult {
    /// Best average entanglement found (bits); a lower bound on the maximum.
    pub value: f64,
    pub measured_sites: Vec<usize>,
    /// Bloch angles (θ, φ) of the measurement basis on each measured site.
    pub angles: Vec<(f64, f64)>,
    /// Index of the starting configuration (all-Z, all-X, all-Y) that won.
    pub start: usize,
}

/// Amplitudes regrouped as [pair index (4)] × [measured configuration].
struct Layout {
    amps: Vec<c64>,
    k: usize,
}

impl Layout {
    fn new(psi: &PureState, pair: (usize, usize), measured: &[usize]) -> Self {
        let space = psi.space();
        let po = space.offsets(&[pair.0, pair.1]);
        let mo = space.offsets(measured);
        let m = mo.len();
        let mut amps = Vec::with_capacity(4 * m);
        for &p in &po {
            for &q in &mo {
                amps.push(psi.amplitudes()[p + q]);
            }
        }
        Self { amps, k: measured.len() }
    }
}

/// Rows ⟨n| and ⟨−n| of the measurement basis with Bloch angles (θ, φ).
fn basis_rows(theta: f64, phi: f64) -> [[c64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = c64::from_polar(1.0, -phi);
    [[c64::new(c, 0.0), e * s], [c64::new(s, 0.0), -e * c]]
}

/// Applies the basis change of measured slot `slot` in place.
fn rotate(amps: &mut [c64], k: usize, slot: usize, rows: &[[c64; 2]; 2]) {
    let stride = 1usize << (k - 1 - slot);
    let block = stride << 1;
    for chunk in amps.chunks_mut(block) {
        for t in 0..stride {
            let (a, b) = (chunk[t], chunk[t + stride]);
            chunk[t] = rows[0][0] * a + rows[0][1] * b;
            chunk[t + stride] = rows[1][0] * a + rows[1][1] * b;
        }
    }
}

fn rotate_all_pairs(amps: &mut [c64], k: usize, slot: usize, rows: &[[c64; 2]; 2]) {
    let m = 1usize << k;
    for p in 0..4 {
        rotate(&mut amps[p * m..(p + 1) * m], k, slot, rows);
    }
}

/// Σ_outcomes p · E(pair) once every measured slot is in the computational basis.
fn average_entanglement(amps: &[c64], k: usize) -> f64 {
    let m = 1usize << k;
    let mut total = 0.0;
    for o in 0..m {
        let v = [amps[o], amps[m + o], amps[2 * m + o], amps[3 * m + o]];
        let p: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if p < 1e-14 {
            continue;
        }
        let det = (v[0] * v[3] - v[1] * v[2]).norm_sqr();
        let x = (4.0 * det / (p * p)).clamp(0.0, 1.0);
        let l = 0.5 * (1.0 + (1.0 - x).sqrt());
        total += p * shannon_bits(&[l, 1.0 - l]);
    }
    total
}

struct Search<'a> {
    layout: &'a Layout,
    opts: LocalizableOptions,
}

impl Search<'_> {
    fn evaluate(&self, angles: &[(f64, f64)]) -> f64 {
        let mut amps = self.layout.amps.clone();
        for (slot, &(t, p)) in angles.iter().enumerate() {
            rotate_all_pairs(&mut amps, self.layout.k, slot, &basis_rows(t, p));
        }
        average_entanglement(&amps, self.layout.k)
    }

    /// Best angles for one slot with the others fixed: grid, then halving refinement.
    fn optimize_slot(&self, angles: &[(f64, f64)], slot: usize, current: f64) -> ((f64, f64), f64) {
        let k = self.layout.k;
        let mut base = self.layout.amps.clone();
        for (s, &(t, p)) in angles.iter().enumerate() {
            if s != slot {
                rotate_all_pairs(&mut base, k, s, &basis_rows(t, p));
            }
        }
        let score = |t: f64, p: f64| {
            let mut amps = base.clone();
            rotate_all_pairs(&mut amps, k, slot, &basis_rows(t, p));
            average_entanglement(&amps, k)
        };
        let mut best = (angles[slot], current);
        let dt = PI / self.opts.theta_points as f64;
        let dp = 2.0 * PI / self.opts.phi_points as f64;
        for i in 0..self.opts.theta_points {
            for j in 0..self.opts.phi_points {
                let (t, p) = (i as f64 * dt, j as f64 * dp);
                let v = score(t, p);
                if v > best.1 + 1e-14 {
                    best = ((t, p), v);
                }
            }
        }
        let (mut st, mut sp) = (dt, dp);
        for _ in 0..self.opts.refinements {
            st /= 2.0;
            sp /= 2.0;
            let centre = best.0;
            for a in [-1.0, 0.0, 1.0] {
                for b in [-1.0, 0.0, 1.0] {
                    let (t, p) = (centre.0 + a * st, centre.1 + b * sp);
                    let v = score(t, p);
                    if v > best.1 + 1e-14 {
                        best = ((t, p), v);
                    }
                }
            }
        }
        best
    }

    fn ascend(&self, mut angles: Vec<(f64, f64)>) -> (f64, Vec<(f64, f64)>) {
        let mut value = self.evaluate(&angles);
        for _ in 0..self.opts.max_sweeps {
            let before = value;
            for slot in 0..angles.len() {
                let (a, v) = self.optimize_slot(&angles, slot, value);
                angles[slot] = a;
                value = v;
            }
            if value - before < 1e-12 {
                break;
            }
        }
        (value, angles)
    }
}

/// Localizable entanglement of the qubit pair `pair` by coordinate ascent
/// over per-site measurement bases, started from the all-Z, all-X and all-Y
/// configurations.
pub fn localizable_entanglement(psi: &PureState, pair: (usize, usize), opts: LocalizableOptions) -> Result<LocalizableResult> {
    let space = psi.space();
    let n = space.n_sites();
    if n > MAX_LOCALIZABLE_SITES {
        return Err(Error::Capacity(format!(
            "localizable entanglement searches at most {MAX_LOCALIZABLE_SITES} sites, got {n}"
        )));
    }
    if !space.is_qubits() {
        return arg(format!("localizable entanglement needs qubits, got dims {:?}", space.dims()));
    }
    if pair.0 == pair.1 || pair.0 >= n || pair.1 >= n {
        return arg(format!("invalid site pair {pair:?} for {n} sites"));
    }
    if opts.theta_points == 0 || opts.phi_points == 0 {
        return arg("angle grid must have at least one point per axis");
    }
    let measured: Vec<usize> = (0..n).filter(|&s| s != pair.0 && s != pair.1).collect();
    let layout = Layout::new(psi, pair, &measured);
    let search = Search { layout: &layout, opts };
    let starts = [(0.0, 0.0), (PI / 2.0, 0.0), (PI / 2.0, PI / 2.0)];
    let runs: Vec<(f64, Vec<(f64, f64)>)> = starts
        .par_iter()
        .map(|&a| search.ascend(vec![a; measured.len()]))
        .collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.0 > runs[best].0 {
            best = i;
        }
    }
    let (value, angles) = runs[best].clone();
    Ok(LocalizableResult { value, measured_sites: measured, angles, start: best })
}

/// Average pair entanglement for fixed measurement angles on the measured sites.
pub fn localized_average(psi: &PureState, pair: (usize, usize), angles: &[(f64, f64)]) -> Result<f64> {
    let n = psi.space().n_sites();
    if !psi.space().is_qubits() || pair.0 == pair.1 || pair.0 >= n || pair.1 >= n {
        return arg(format!("invalid qubit pair {pair:?}"));
    }
    let measured: Vec<usize> = (0..n).filter(|&s| s != pair.0 && s != pair.1).collect();
    if angles.len() != measured.len() {
        return arg(format!("expected {} angle pairs, got {}", measured.len(), angles.len()));
    }
    let layout = Layout::new(psi, pair, &measured);
    let search = Search { layout: &layout, opts: LocalizableOptions::default() };
    Ok(search.evaluate(angles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{compose, SiteSpace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ghz_localizes_a_bell_pair() {
        let r = localizable_entanglement(&PureState::ghz(4).unwrap(), (0, 3), Default::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
        // Z measurements leave a product pair.
        let z = localized_average(&PureState::ghz(4).unwrap(), (0, 3), &[(0.0, 0.0); 2]).unwrap();
        assert!(z.abs() < 1e-12);
    }

    #[test]
    fn product_state_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let locals: Vec<PureState> = (0..5).map(|_| PureState::random(SiteSpace::qubits(1).unwrap(), &mut rng)).collect();
        let psi = compose(&locals).unwrap();
        let r = localizable_entanglement(&psi, (1, 3), Default::default()).unwrap();
        assert!(r.value.abs() < 1e-10);
    }

    #[test]
    fn separated_bell_pairs_give_zero() {
        let psi = compose(&[PureState::phi_plus(), PureState::phi_plus()]).unwrap();
        let r = localizable_entanglement(&psi, (0, 3), Default::default()).unwrap();
        assert!(r.value < 1e-6);
    }

    #[test]
    fn never_below_fixed_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let psi = PureState::random(SiteSpace::qubits(5).unwrap(), &mut rng);
            let r = localizable_entanglement(&psi, (0, 4), Default::default()).unwrap();
            for a in [(0.0, 0.0), (PI / 2.0, 0.0), (PI / 2.0, PI / 2.0)] {
                let fixed = localized_average(&psi, (0, 4), &[a; 3]).unwrap();
                assert!(r.value >= fixed - 1e-12);
            }
            let again = localized_average(&psi, (0, 4), &r.angles).unwrap();
            assert!((again - r.value).abs() < 1e-12);
        }
    }

    #[test]
    fn too_many_sites_rejected() {
        let psi = PureState::ghz(9).unwrap();
        assert!(matches!(localizable_entanglement(&psi, (0, 1), Default::default()), Err(Error::Capacity(_))));
    }
}
