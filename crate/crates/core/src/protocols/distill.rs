//! Single-copy filtering of cos θ|0,0⟩ + sin θ|1,1⟩ into a Bell pair, and
//! averaged-yield bookkeeping for multi-copy outcome distributions.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::linalg::{diag, hermitian_function, identity, CMat};
use crate::measures::{entanglement_entropy, mes_fidelity_closed_form, schmidt_decompose};
use crate::state::{apply_measurement, KrausSet, PureState, RegionPartition, Selection, SiteSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistillMode {
    /// Every branch with nonzero probability.
    BothBranches,
    /// One branch drawn with the given seed.
    Sampled(u64),
}

#[derive(Debug, Clone)]
pub struct BranchRecord {
    pub label: String,
    pub probability: f64,
    pub post: PureState,
    /// max over local unitaries of the overlap with |Φ⁺⟩.
    pub mes_fidelity: f64,
    /// |⟨Φ⁺|ψ⟩|².
    pub phi_plus_fidelity: f64,
    pub entanglement: f64,
}

#[derive(Serialize)]
struct BranchSummary<'a> {
    label: &'a str,
    probability: f64,
    mes_fidelity: f64,
    phi_plus_fidelity: f64,
    entanglement: f64,
}

impl Serialize for BranchRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BranchSummary {
            label: &self.label,
            probability: self.probability,
            mes_fidelity: self.mes_fidelity,
            phi_plus_fidelity: self.phi_plus_fidelity,
            entanglement: self.entanglement,
        }
        .serialize(s)
    }
}

pub fn filter_input_state(theta: f64) -> PureState {
    PureState::theta_state(theta)
}

/// A₀ = tan θ|0⟩⟨0| + |1⟩⟨1| ("success") and A₁ = (1 − A₀†A₀)^{1/2} ("failure"),
/// both acting on a single qubit.
pub fn distillation_kraus(theta: f64) -> Result<KrausSet> {
    let a0 = diag(&[theta.tan(), 1.0]);
    let rest: CMat = &identity(2) - &(a0.adjoint() * &a0);
    let a1 = hermitian_function(&rest, |x| x.max(0.0).sqrt())?;
    KrausSet::new(vec![a0, a1], vec!["success".into(), "failure".into()])
}

fn record(label: String, probability: f64, post: PureState) -> Result<BranchRecord> {
    let cut = RegionPartition::chain(2, &[0])?;
    let schmidt = schmidt_decompose(&post, &cut)?;
    Ok(BranchRecord {
        label,
        probability,
        mes_fidelity: mes_fidelity_closed_form(&schmidt.coefficients, 2),
        phi_plus_fidelity: post.fidelity(&PureState::phi_plus()),
        entanglement: entanglement_entropy(&post, &cut)?,
        post,
    })
}

/// Applies the filter to Alice's qubit of cos θ|0,0⟩ + sin θ|1,1⟩.
pub fn filter_distill(theta: f64, mode: DistillMode) -> Result<Vec<BranchRecord>> {
    if theta == 0.0 {
        return Err(Error::DegenerateInput("θ = 0 is a product state; the success probability is 0".into()));
    }
    if !(theta > 0.0 && theta <= FRAC_PI_4 + 1e-15) {
        return arg(format!("θ must lie in (0, π/4], got {theta}"));
    }
    let psi = filter_input_state(theta);
    let kraus = distillation_kraus(theta)?.embed(&SiteSpace::qubits(2)?, &[0])?;
    match mode {
        DistillMode::Sampled(seed) => {
            let o = apply_measurement(&psi, &kraus, Selection::Seed(seed))?;
            Ok(vec![record(o.label, o.probability, o.post)?])
        }
        DistillMode::BothBranches => {
            let mut out = Vec::new();
            for i in 0..kraus.len() {
                match apply_measurement(&psi, &kraus, Selection::Forced(i)) {
                    Ok(o) => out.push(record(o.label, o.probability, o.post)?),
                    Err(Error::ZeroProbabilityBranch { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
    }
}

/// Ē = (1/n) Σ p_d log₂ d with n = log₂ of the largest outcome dimension.
pub fn average_yield(outcomes: &[(f64, usize)]) -> Result<f64> {
    if outcomes.is_empty() {
        return arg("outcome distribution is empty");
    }
    if let Some(&(p, d)) = outcomes.iter().find(|&&(p, d)| !(p >= 0.0) || d == 0) {
        return arg(format!("invalid outcome (p = {p}, d = {d})"));
    }
    let total: f64 = outcomes.iter().map(|o| o.0).sum();
    if (total - 1.0).abs() > 1e-10 {
        return arg(format!("outcome probabilities sum to {total}, not 1"));
    }
    let max_d = outcomes.iter().map(|o| o.1).max().unwrap_or(1);
    if max_d == 1 {
        return Ok(0.0);
    }
    let n = (max_d as f64).log2();
    Ok(outcomes.iter().map(|&(p, d)| p * (d as f64).log2()).sum::<f64>() / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::validate_kraus;
    use std::f64::consts::PI;

    #[test]
    fn kraus_set_is_complete() {
        for theta in [PI / 12.0, PI / 6.0, PI / 4.0] {
            assert!(validate_kraus(&distillation_kraus(theta).unwrap()).unwrap().pass);
        }
    }

    #[test]
    fn success_probability_and_fidelity() {
        for theta in [PI / 12.0, PI / 8.0, PI / 6.0, PI / 5.0] {
            let b = filter_distill(theta, DistillMode::BothBranches).unwrap();
            assert_eq!(b.len(), 2);
            assert!((b[0].probability - 2.0 * theta.sin().powi(2)).abs() < 1e-12);
            assert!(b[0].mes_fidelity >= 1.0 - 1e-10);
            assert!((b[0].phi_plus_fidelity - 1.0).abs() < 1e-12);
            assert!(b[1].entanglement < 1e-10);
            assert!((b[0].probability + b[1].probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_entangled_input_always_succeeds() {
        let b = filter_distill(PI / 4.0, DistillMode::BothBranches).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_success_at_pi_over_six() {
        let b = filter_distill(PI / 6.0, DistillMode::BothBranches).unwrap();
        assert!((b[0].probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampled_mode_returns_one_branch() {
        let a = filter_distill(PI / 6.0, DistillMode::Sampled(5)).unwrap();
        let b = filter_distill(PI / 6.0, DistillMode::Sampled(5)).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].label, b[0].label);
    }

    #[test]
    fn degenerate_and_out_of_range() {
        assert!(matches!(filter_distill(0.0, DistillMode::BothBranches), Err(Error::DegenerateInput(_))));
        assert!(matches!(filter_distill(1.0, DistillMode::BothBranches), Err(Error::Argument(_))));
    }

    #[test]
    fn yield_bookkeeping() {
        assert!((average_yield(&[(1.0, 8)]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(average_yield(&[(1.0, 1)]).unwrap(), 0.0);
        assert!((average_yield(&[(0.5, 4), (0.5, 1)]).unwrap() - 0.5).abs() < 1e-15);
        assert!(average_yield(&[(0.5, 4)]).is_err());
        assert!(average_yield(&[(1.0, 0)]).is_err());
    }
}
