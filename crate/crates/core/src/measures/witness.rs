//! Entanglement witnesses: the two-qubit CHSH operator and the
//! continuous-variable EPR-type operator on truncated oscillators.

use faer::Mat;
use num_complex::Complex64 as c64;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::{identity, kron, re, scale, CMat, ZERO};
use crate::state::pauli::Direction;
use crate::state::{expectation, PureState, SiteSpace, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessId {
    Chsh,
    ContinuousVariable,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub witness_id: WitnessId,
    /// ⟨W⟩.
    pub expectation: f64,
    /// ⟨W⟩ < 0.
    pub detected: bool,
}

impl WitnessReport {
    fn new(witness_id: WitnessId, expectation: f64) -> Self {
        Self { witness_id, expectation, detected: expectation < 0.0 }
    }
}

/// S = σ₁ᴬ⊗(σ₁ᴮ + σ₂ᴮ) + σ₂ᴬ⊗(σ₁ᴮ − σ₂ᴮ) for directions in the xz-plane
/// given as (n_x, n_z).
pub fn chsh_operator(alice: [(f64, f64); 2], bob: [(f64, f64); 2]) -> Result<CMat> {
    let a1 = Direction::new(alice[0].0, alice[0].1)?.sigma();
    let a2 = Direction::new(alice[1].0, alice[1].1)?.sigma();
    let b1 = Direction::new(bob[0].0, bob[0].1)?.sigma();
    let b2 = Direction::new(bob[1].0, bob[1].1)?.sigma();
    Ok(&kron(&a1, &(&b1 + &b2)) + &kron(&a2, &(&b1 - &b2)))
}

/// W = 2 − S on two qubits.
pub fn chsh_witness<S: State + ?Sized>(state: &S, alice: [(f64, f64); 2], bob: [(f64, f64); 2]) -> Result<WitnessReport> {
    if state.space().dims() != [2, 2] {
        return arg(format!("CHSH witness needs two qubits, got dims {:?}", state.space().dims()));
    }
    let s = chsh_operator(alice, bob)?;
    let value = 2.0 - expectation(state, &s, &[0, 1])?;
    Ok(WitnessReport::new(WitnessId::Chsh, value))
}

/// Annihilation operator on the Fock states |0⟩ … |n_max⟩.
pub fn annihilation(n_max: usize) -> CMat {
    let d = n_max + 1;
    Mat::from_fn(d, d, |i, j| if j == i + 1 { re((j as f64).sqrt()) } else { ZERO })
}

/// Quadratures X = (a + a†)/√2 and P = −i(a − a†)/√2, so [X, P] = i away
/// from the truncation edge.
pub fn quadratures(n_max: usize) -> (CMat, CMat) {
    let a = annihilation(n_max);
    let ad = a.adjoint().to_owned();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = scale(&(&a + &ad), re(s));
    let p = scale(&(&a - &ad), c64::new(0.0, -s));
    (x, p)
}

/// Population in Fock levels above n_max/2, maximized over the two modes.
pub fn truncation_leak<S: State + ?Sized>(state: &S) -> Result<f64> {
    let mut leak = 0.0f64;
    for site in 0..2 {
        let r = state.reduced_matrix(&[site])?;
        let d = r.nrows();
        let half = (d - 1) / 2;
        let above: f64 = (half + 1..d).map(|n| r[(n, n)].re).sum();
        leak = leak.max(above);
    }
    Ok(leak)
}

/// W = (X − Y)² + (P + Q)² − 2 on two equally truncated modes.
pub fn cv_witness<S: State + ?Sized>(state: &S) -> Result<WitnessReport> {
    let dims = state.space().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return arg(format!("CV witness needs two equally truncated modes, got dims {dims:?}"));
    }
    let leak = truncation_leak(state)?;
    if leak > 1e-8 {
        return Err(Error::Truncation { leak });
    }
    let n_max = dims[0] - 1;
    let (x, p) = quadratures(n_max);
    let id = identity(n_max + 1);
    let minus = &kron(&x, &id) - &kron(&id, &x);
    let plus = &kron(&p, &id) + &kron(&id, &p);
    let s = &(&minus * &minus) + &(&plus * &plus);
    let value = expectation(state, &crate::linalg::hermitize(&s), &[0, 1])? - 2.0;
    Ok(WitnessReport::new(WitnessId::ContinuousVariable, value))
}

/// sech r Σ_n tanh(r)ⁿ |n, n⟩, truncated at n_max and renormalized.
pub fn two_mode_squeezed(r: f64, n_max: usize) -> Result<PureState> {
    let d = n_max + 1;
    let space = SiteSpace::new(vec![d, d])?;
    let mut amps = vec![ZERO; d * d];
    let t = r.tanh();
    for n in 0..d {
        amps[n * d + n] = re(t.powi(n as i32) / r.cosh());
    }
    PureState::normalized(space, amps)
}

/// Coherent state amplitudes e^{−|α|²/2} αⁿ/√n! on n ≤ n_max.
pub fn coherent(alpha: c64, n_max: usize) -> Vec<c64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut term = re((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..=n_max {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        out.push(term);
    }
    out
}
