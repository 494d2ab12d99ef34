//! Transfer-matrix contractions: norms, local expectations and correlations.

use num_complex::Complex64 as c64;
use serde::Serialize;

use super::tensor::{Gauge, MpsState};
use crate::error::{arg, Error, Result};
use crate::linalg::{zeros, CMat, ZERO};

/// Order in which the transfer matrices are multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionOrder {
    LeftToRight,
    RightToLeft,
}

/// Σ_{n',n} O_{n'n} A^{n'}† L A^n (O = 1 when absent).
pub(crate) fn push_left(l: &CMat, site: &[CMat], op: Option<&CMat>) -> CMat {
    let dr = site[0].ncols();
    let mut out = zeros(dr, dr);
    let d = site.len();
    for n in 0..d {
        let la = l * &site[n];
        for np in 0..d {
            let w = match op {
                Some(o) => o[(np, n)],
                None if np == n => c64::new(1.0, 0.0),
                None => continue,
            };
            if w == ZERO {
                continue;
            }
            out += crate::linalg::scale(&(site[np].adjoint() * &la), w);
        }
    }
    out
}

/// Σ_{n',n} O_{n'n} A^n R A^{n'}† with R indexed (ket, bra).
pub(crate) fn push_right(r: &CMat, site: &[CMat], op: Option<&CMat>) -> CMat {
    let dl = site[0].nrows();
    let mut out = zeros(dl, dl);
    let d = site.len();
    for n in 0..d {
        let ar = &site[n] * r;
        for np in 0..d {
            let w = match op {
                Some(o) => o[(np, n)],
                None if np == n => c64::new(1.0, 0.0),
                None => continue,
            };
            if w == ZERO {
                continue;
            }
            out += crate::linalg::scale(&(&ar * site[np].adjoint()), w);
        }
    }
    out
}

fn unit(k: usize, i: usize, j: usize) -> CMat {
    let mut e = zeros(k, k);
    e[(i, j)] = c64::new(1.0, 0.0);
    e
}

/// ⟨ψ|⊗O_m|ψ⟩ without normalization. Periodic chains carry one environment
/// per pair of boundary indices, so the trace closure is exact.
fn contract(mps: &MpsState, ops: &[Option<&CMat>], order: ContractionOrder) -> c64 {
    let n = mps.n_sites();
    let d0 = mps.site(0)[0].nrows();
    let mut total = ZERO;
    for a in 0..d0 {
        for b in 0..d0 {
            match order {
                ContractionOrder::LeftToRight => {
                    // Environment indexed (bra, ket); starts at |bra a⟩⟨ket b|.
                    let mut env = unit(d0, a, b);
                    for m in 0..n {
                        env = push_left(&env, mps.site(m), ops[m]);
                    }
                    total += env[(a, b)];
                }
                ContractionOrder::RightToLeft => {
                    // Environment indexed (ket, bra).
                    let mut env = unit(d0, a, b);
                    for m in (0..n).rev() {
                        env = push_right(&env, mps.site(m), ops[m]);
                    }
                    total += env[(a, b)];
                }
            }
        }
    }
    total
}

fn operator_slots<'a>(mps: &MpsState, ops: &'a [(usize, CMat)]) -> Result<Vec<Option<&'a CMat>>> {
    let d = mps.phys_dim();
    let mut slots = vec![None; mps.n_sites()];
    for (site, op) in ops {
        if *site >= mps.n_sites() {
            return arg(format!("site {site} outside the chain"));
        }
        if op.nrows() != d || op.ncols() != d {
            return arg(format!("operator at site {site} is {}x{}, expected {d}x{d}", op.nrows(), op.ncols()));
        }
        if slots[*site].is_some() {
            return arg(format!("two operators on site {site}"));
        }
        slots[*site] = Some(op);
    }
    Ok(slots)
}

/// ⟨ψ|ψ⟩.
pub fn mps_norm_squared(mps: &MpsState) -> f64 {
    contract(mps, &vec![None; mps.n_sites()], ContractionOrder::LeftToRight).re
}

/// ⟨⊗_k O_k⟩ / ⟨ψ|ψ⟩ for single-site operators on distinct sites.
pub fn mps_expectation(mps: &MpsState, ops: &[(usize, CMat)]) -> Result<c64> {
    mps_expectation_ordered(mps, ops, ContractionOrder::LeftToRight)
}

pub fn mps_expectation_ordered(mps: &MpsState, ops: &[(usize, CMat)], order: ContractionOrder) -> Result<c64> {
    let slots = operator_slots(mps, ops)?;
    let norm = contract(mps, &vec![None; mps.n_sites()], order).re;
    if !(norm > 1e-300) {
        return Err(Error::DegenerateInput("zero-norm MPS".into()));
    }
    Ok(contract(mps, &slots, order) / norm)
}

/// ⟨O_m⟩ of a left-canonical state from the site tensor and the right
/// environment only: the left environment is the identity.
pub fn canonical_local_expectation(mps: &MpsState, site: usize, op: &CMat) -> Result<c64> {
    if mps.gauge() != Gauge::LeftCanonical {
        return arg("state is not flagged left-canonical");
    }
    operator_slots(mps, &[(site, op.clone())])?;
    let mut env = zeros(1, 1);
    env[(0, 0)] = c64::new(1.0, 0.0);
    for m in (site + 1..mps.n_sites()).rev() {
        env = push_right(&env, mps.site(m), None);
    }
    let num = push_right(&env, mps.site(site), Some(op));
    let den = push_right(&env, mps.site(site), None);
    let tr = |x: &CMat| (0..x.nrows()).map(|i| x[(i, i)]).sum::<c64>();
    Ok(tr(&num) / tr(&den).re)
}

/// How a connected correlation behaves with distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorrelationDecay {
    /// Every |C(r)| below 1e-12.
    Vanishing,
    /// |C(r)| ≈ a e^{−r/ξ}; `residual` is the RMS deviation of ln|C(r)|
    /// from the fitted line.
    Exponential { xi: f64, residual: f64 },
    /// The fitted rate is not negative: long-range order.
    NonDecaying,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub origin: usize,
    /// (r, C(r)) with C(r) = ⟨O₁(origin) O₂(origin + r)⟩ − ⟨O₁⟩⟨O₂⟩.
    pub points: Vec<(usize, f64)>,
    pub decay: CorrelationDecay,
}

const VANISHING: f64 = 1e-12;

/// Connected correlations from `origin` (periodic chains wrap around).
pub fn mps_correlation(mps: &MpsState, o1: &CMat, o2: &CMat, origin: usize, separations: &[usize]) -> Result<CorrelationReport> {
    let n = mps.n_sites();
    let periodic = mps.boundary() == super::MpsBoundary::Periodic;
    let mut points = Vec::with_capacity(separations.len());
    let first = mps_expectation(mps, &[(origin, o1.clone())])?.re;
    for &r in separations {
        if r == 0 || (!periodic && origin + r >= n) || r >= n {
            return arg(format!("separation {r} does not fit the chain"));
        }
        let j = (origin + r) % n;
        let joint = mps_expectation(mps, &[(origin, o1.clone()), (j, o2.clone())])?.re;
        let second = mps_expectation(mps, &[(j, o2.clone())])?.re;
        points.push((r, joint - first * second));
    }
    let decay = classify(&points);
    Ok(CorrelationReport { origin, points, decay })
}

fn classify(points: &[(usize, f64)]) -> CorrelationDecay {
    if points.iter().all(|p| p.1.abs() < VANISHING) {
        return CorrelationDecay::Vanishing;
    }
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1.abs() >= VANISHING)
        .map(|&(r, c)| (r as f64, c.abs().ln()))
        .collect();
    if data.len() < 2 {
        return CorrelationDecay::Vanishing;
    }
    let k = data.len() as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / k;
    let my = data.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = data.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    if slope > -1e-9 {
        return CorrelationDecay::NonDecaying;
    }
    let intercept = my - slope * mx;
    let residual = (data.iter().map(|p| (intercept + slope * p.0 - p.1).powi(2)).sum::<f64>() / k).sqrt();
    CorrelationDecay::Exponential { xi: -1.0 / slope, residual }
}
