use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{embed_operator, DensityOperator, PureState, SiteSpace, State};
use crate::error::{arg, Error, Result};
use crate::linalg::{identity, max_abs_diff, norm, re, scale, trace, CMat};

/// Probability below which a branch counts as impossible.
pub const ZERO_BRANCH: f64 = 1e-14;
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Operators A_μ of a generalized measurement, with outcome labels.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<CMat>,
    labels: Vec<String>,
}

impl KrausSet {
    /// Checks shapes only; completeness is reported by [`validate_kraus`].
    pub fn new(operators: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return arg("empty Kraus set");
        };
        let shape = (first.nrows(), first.ncols());
        if operators.iter().any(|a| (a.nrows(), a.ncols()) != shape) {
            return arg("Kraus operators have different shapes");
        }
        if labels.len() != operators.len() {
            return arg(format!("{} labels for {} operators", labels.len(), operators.len()));
        }
        Ok(Self { operators, labels })
    }

    /// Labels the operators "0", "1", ...
    pub fn unlabeled(operators: Vec<CMat>) -> Result<Self> {
        let labels = (0..operators.len()).map(|i| i.to_string()).collect();
        Self::new(operators, labels)
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.operators[0].ncols()
    }

    /// Lifts operators acting on `sites` to the whole of `space`.
    pub fn embed(&self, space: &SiteSpace, sites: &[usize]) -> Result<KrausSet> {
        let ops = self
            .operators
            .iter()
            .map(|a| embed_operator(space, a, sites))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops, self.labels.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KrausCheck {
    /// Largest entry of |Σ A†A − 1|.
    pub residual: f64,
    pub pass: bool,
}

pub fn validate_kraus(kraus: &KrausSet) -> Result<KrausCheck> {
    let n = kraus.input_dim();
    let mut sum = crate::linalg::zeros(n, n);
    for a in &kraus.operators {
        sum = &sum + &(a.adjoint() * a);
    }
    let residual = max_abs_diff(&sum, &identity(n));
    Ok(KrausCheck { residual, pass: residual <= COMPLETENESS_TOL })
}

/// How to pick the branch of a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Sample from {p_μ} with a ChaCha stream seeded by the value.
    Seed(u64),
    /// Return this branch with its probability.
    Forced(usize),
}

#[derive(Debug, Clone)]
pub struct Outcome<S> {
    pub index: usize,
    pub label: String,
    pub probability: f64,
    pub post: S,
}

/// States that a Kraus operator can act on.
pub trait Measurable: State + Sized {
    /// Probability of the branch and, when it is above the zero floor,
    /// the renormalized post-measurement state.
    fn branch(&self, op: &CMat) -> Result<(f64, Option<Self>)>;
}

impl Measurable for PureState {
    fn branch(&self, op: &CMat) -> Result<(f64, Option<Self>)> {
        let v = crate::linalg::matvec(op, self.amplitudes());
        let p = norm(&v).powi(2);
        if p < ZERO_BRANCH {
            return Ok((p, None));
        }
        let post = PureState::normalized(self.space().clone(), v)?;
        Ok((p, Some(post)))
    }
}

impl Measurable for DensityOperator {
    fn branch(&self, op: &CMat) -> Result<(f64, Option<Self>)> {
        let m = self.conjugate_by(op);
        let p = trace(&m).re;
        if p < ZERO_BRANCH {
            return Ok((p, None));
        }
        let post = DensityOperator::from_parts_unchecked(self.space().clone(), scale(&m, re(1.0 / p)));
        Ok((p, Some(post)))
    }
}

fn check_dims<S: State>(state: &S, kraus: &KrausSet) -> Result<()> {
    let check = validate_kraus(kraus)?;
    if !check.pass {
        return arg(format!("Kraus set is not complete (residual {:e})", check.residual));
    }
    if kraus.input_dim() != state.space().dim() || kraus.operators[0].nrows() != state.space().dim() {
        return arg(format!(
            "Kraus operators act on dimension {} but the state has {}",
            kraus.input_dim(),
            state.space().dim()
        ));
    }
    Ok(())
}

/// p_μ = tr(A_μ ρ A_μ†) and ρ_μ = A_μ ρ A_μ† / p_μ for the selected branch.
pub fn apply_measurement<S: Measurable>(state: &S, kraus: &KrausSet, selection: Selection) -> Result<Outcome<S>> {
    match selection {
        Selection::Forced(index) => {
            check_dims(state, kraus)?;
            if index >= kraus.len() {
                return arg(format!("outcome {index} out of range for {} operators", kraus.len()));
            }
            let (probability, post) = state.branch(&kraus.operators[index])?;
            let post = post.ok_or_else(|| Error::ZeroProbabilityBranch {
                label: kraus.labels[index].clone(),
                probability,
            })?;
            Ok(Outcome { index, label: kraus.labels[index].clone(), probability, post })
        }
        Selection::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_measurement(state, kraus, &mut rng)
        }
    }
}

/// Samples an outcome from {p_μ} using `rng`.
pub fn sample_measurement<S: Measurable, R: Rng + ?Sized>(state: &S, kraus: &KrausSet, rng: &mut R) -> Result<Outcome<S>> {
    check_dims(state, kraus)?;
    let u: f64 = rng.random();
    let mut branches = Vec::with_capacity(kraus.len());
    let mut total = 0.0;
    for op in &kraus.operators {
        let b = state.branch(op)?;
        total += b.0;
        branches.push(b);
    }
    let target = u * total;
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, (p, post)) in branches.iter().enumerate() {
        if post.is_none() {
            continue;
        }
        acc += p;
        chosen = Some(i);
        if target < acc {
            break;
        }
    }
    let index = chosen.ok_or_else(|| Error::Numerical("every branch has zero probability".into()))?;
    let (probability, post) = branches.swap_remove(index);
    Ok(Outcome { index, label: kraus.labels[index].clone(), probability, post: post.unwrap() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_function, max_abs_diff};
    use crate::state::pauli::projector;

    fn filter(theta: f64) -> KrausSet {
        let a0 = crate::linalg::diag(&[theta.tan(), 1.0]);
        let rest = &identity(2) - &(a0.adjoint() * &a0);
        let a1 = hermitian_function(&rest, |x| x.max(0.0).sqrt()).unwrap();
        KrausSet::unlabeled(vec![a0, a1]).unwrap()
    }

    #[test]
    fn projective_measurement_of_plus() {
        let k = KrausSet::unlabeled(vec![projector(0), projector(1)]).unwrap();
        for bit in 0..2 {
            let o = apply_measurement(&PureState::plus(), &k, Selection::Forced(bit)).unwrap();
            assert!((o.probability - 0.5).abs() < 1e-15);
            assert!((o.post.amplitudes()[bit].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn distillation_filter_success_probability() {
        let theta = 0.4;
        let psi = PureState::theta_state(theta);
        let k = filter(theta).embed(psi.space(), &[0]).unwrap();
        let o = apply_measurement(&psi, &k, Selection::Forced(0)).unwrap();
        assert!((o.probability - 2.0 * theta.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn identity_set_leaves_state_alone() {
        let rho = DensityOperator::werner(0.4).unwrap();
        let k = KrausSet::unlabeled(vec![identity(4)]).unwrap();
        let o = apply_measurement(&rho, &k, Selection::Seed(9)).unwrap();
        assert!((o.probability - 1.0).abs() < 1e-15);
        assert!(max_abs_diff(o.post.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn completeness_checks() {
        assert!(validate_kraus(&filter(0.3)).unwrap().pass);
        let p = KrausSet::unlabeled(vec![projector(0), projector(1)]).unwrap();
        assert!(validate_kraus(&p).unwrap().pass);
        let half = KrausSet::unlabeled(vec![scale(&identity(2), re(0.5))]).unwrap();
        let c = validate_kraus(&half).unwrap();
        assert!(!c.pass);
        assert!((c.residual - 0.75).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch_is_argument_error() {
        assert!(matches!(KrausSet::unlabeled(vec![identity(2), identity(3)]), Err(Error::Argument(_))));
    }

    #[test]
    fn forced_zero_branch_errors() {
        let k = KrausSet::unlabeled(vec![projector(0), projector(1)]).unwrap();
        let zero = PureState::basis(SiteSpace::new(vec![2]).unwrap(), &[0]).unwrap();
        let e = apply_measurement(&zero, &k, Selection::Forced(1)).unwrap_err();
        assert!(matches!(e, Error::ZeroProbabilityBranch { .. }));
    }
}
