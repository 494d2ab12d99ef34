//! Spin-chain Hamiltonians: Majumdar-Ghosh, Heisenberg, transverse-field Ising.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::linalg::{kron, re, scale, CMat};
use crate::state::pauli::{sigma_x, sigma_y, sigma_z};
use crate::state::{Lattice, PureState, SiteSpace};

use super::hamiltonian::{LocalHamiltonian, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Σ S⃗ⁱ·S⃗ⁱ⁺¹ + ½ S⃗ⁱ·S⃗ⁱ⁺² on a periodic chain of even length.
    MajumdarGhosh,
    /// Σ S⃗ⁱ·S⃗ⁱ⁺¹ − B Σ S_zⁱ.
    Heisenberg,
    /// −Σ σ_zⁱσ_zⁱ⁺¹ − B Σ σ_xⁱ.
    TransverseIsing,
}

impl ModelKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mg" | "majumdar-ghosh" => Some(Self::MajumdarGhosh),
            "heisenberg" => Some(Self::Heisenberg),
            "ising" | "transverse-ising" => Some(Self::TransverseIsing),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::MajumdarGhosh => "majumdar-ghosh",
            Self::Heisenberg => "heisenberg",
            Self::TransverseIsing => "transverse-ising",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    /// Field strength B.
    pub field: f64,
    pub boundary: Boundary,
}

impl ModelSpec {
    /// Periodic chain with zero field.
    pub fn new(kind: ModelKind, n: usize) -> Self {
        Self { kind, n, field: 0.0, boundary: Boundary::Periodic }
    }

    pub fn with_field(mut self, b: f64) -> Self {
        self.field = b;
        self
    }

    pub fn open(mut self) -> Self {
        self.boundary = Boundary::Open;
        self
    }
}

/// S⃗·S⃗ = ¼ (σ_x⊗σ_x + σ_y⊗σ_y + σ_z⊗σ_z).
pub fn spin_exchange() -> CMat {
    let s = &(&kron(&sigma_x(), &sigma_x()) + &kron(&sigma_y(), &sigma_y())) + &kron(&sigma_z(), &sigma_z());
    scale(&s, re(0.25))
}

/// Bonds (i, i + range) of a chain, wrapping when periodic.
fn bonds(n: usize, range: usize, periodic: bool) -> Vec<(usize, usize)> {
    if periodic {
        if n <= range {
            return Vec::new();
        }
        (0..n).map(|i| (i, (i + range) % n)).collect()
    } else {
        (0..n.saturating_sub(range)).map(|i| (i, i + range)).collect()
    }
}

pub fn build_model(spec: &ModelSpec) -> Result<LocalHamiltonian> {
    let n = spec.n;
    if n < 2 {
        return arg(format!("n = {n}: models need at least two sites"));
    }
    if !spec.field.is_finite() {
        return arg(format!("field B = {} is not finite", spec.field));
    }
    let periodic = spec.boundary == Boundary::Periodic;
    let space = SiteSpace::qubits(n)?;
    let lattice = Lattice::Chain { n, periodic };
    let mut terms = Vec::new();
    match spec.kind {
        ModelKind::MajumdarGhosh => {
            if n % 2 != 0 || !periodic {
                return arg(format!("Majumdar-Ghosh needs an even periodic chain, got n = {n}, {:?}", spec.boundary));
            }
            let e = spin_exchange();
            for (i, j) in bonds(n, 1, true) {
                terms.push(Term { sites: vec![i, j], matrix: e.clone() });
            }
            for (i, j) in bonds(n, 2, true) {
                terms.push(Term { sites: vec![i, j], matrix: scale(&e, re(0.5)) });
            }
        }
        ModelKind::Heisenberg => {
            let e = spin_exchange();
            for (i, j) in bonds(n, 1, periodic && n > 2) {
                terms.push(Term { sites: vec![i, j], matrix: e.clone() });
            }
            if spec.field != 0.0 {
                for i in 0..n {
                    terms.push(Term { sites: vec![i], matrix: scale(&sigma_z(), re(-0.5 * spec.field)) });
                }
            }
        }
        ModelKind::TransverseIsing => {
            let zz = scale(&kron(&sigma_z(), &sigma_z()), re(-1.0));
            for (i, j) in bonds(n, 1, periodic && n > 2) {
                terms.push(Term { sites: vec![i, j], matrix: zz.clone() });
            }
            if spec.field != 0.0 {
                for i in 0..n {
                    terms.push(Term { sites: vec![i], matrix: scale(&sigma_x(), re(-spec.field)) });
                }
            }
        }
    }
    LocalHamiltonian::new(space, lattice, terms)
}

/// Product of singlets (|0,1⟩ − |1,0⟩)/√2 on the pairs (offset + 2k, offset + 2k + 1) mod n.
pub fn dimer_state(n: usize, offset: usize) -> Result<PureState> {
    if n < 2 || n % 2 != 0 {
        return arg(format!("dimer coverings need an even number of sites, got {n}"));
    }
    let space = SiteSpace::qubits(n)?;
    let dim = space.dim();
    let strides = space.strides();
    let pairs: Vec<(usize, usize)> = (0..n / 2).map(|k| ((offset + 2 * k) % n, (offset + 2 * k + 1) % n)).collect();
    let amp = (0.5f64).powf(n as f64 / 4.0);
    let mut amps = vec![re(0.0); dim];
    for (idx, a) in amps.iter_mut().enumerate() {
        let bit = |s: usize| (idx / strides[s]) & 1;
        let mut sign = 1.0;
        let mut ok = true;
        for &(p, q) in &pairs {
            match (bit(p), bit(q)) {
                (0, 1) => {}
                (1, 0) => sign = -sign,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            *a = re(sign * amp);
        }
    }
    PureState::new(space, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ground_state;

    #[test]
    fn mg_term_count() {
        let h = build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 4)).unwrap();
        assert_eq!(h.terms().len(), 8);
        assert!(build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 5)).is_err());
        assert!(build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 6).open()).is_err());
    }

    #[test]
    fn ising_classical_limit() {
        let h = build_model(&ModelSpec::new(ModelKind::TransverseIsing, 4)).unwrap();
        let s = ground_state(&h).unwrap();
        assert!((s.ground_energy + 4.0).abs() < 1e-12);
        assert_eq!(s.ground_degeneracy, 2);
    }

    #[test]
    fn mg_dimers_are_ground_states() {
        let h = build_model(&ModelSpec::new(ModelKind::MajumdarGhosh, 8)).unwrap();
        let s = ground_state(&h).unwrap();
        assert_eq!(s.ground_degeneracy, 2);
        for offset in [0, 1] {
            let d = dimer_state(8, offset).unwrap();
            assert!((h.energy(&d).unwrap() - s.ground_energy).abs() < 1e-9);
            let weight: f64 = s.ground_vectors.iter().map(|g| g.fidelity(&d)).sum();
            assert!((weight - 1.0).abs() < 1e-9);
        }
        // −3/8 per site for the exact dimer energy.
        assert!((s.ground_energy + 3.0).abs() < 1e-9);
    }

    #[test]
    fn exchange_spectrum() {
        let ev = crate::linalg::eigvalsh(&spin_exchange()).unwrap();
        assert!((ev[0] + 0.75).abs() < 1e-15);
        assert!(ev[1..].iter().all(|e| (e - 0.25).abs() < 1e-15));
    }
}
