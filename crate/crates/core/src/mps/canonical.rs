//! Gauge fixing and compression of dense states.

use num_complex::Complex64 as c64;

use super::tensor::{Gauge, MpsBoundary, MpsState};
use crate::error::{arg, Error, Result};
use crate::linalg::{adjoint, qr, svd, CMat, ONE};
use crate::state::PureState;

/// Stacks the site into a (d·D_l) × D_r matrix with row n·D_l + α.
pub(crate) fn stack_rows(site: &[CMat]) -> CMat {
    let (dl, dr) = (site[0].nrows(), site[0].ncols());
    CMat::from_fn(site.len() * dl, dr, |r, b| site[r / dl][(r % dl, b)])
}

pub(crate) fn unstack_rows(m: &CMat, d: usize) -> Vec<CMat> {
    let dl = m.nrows() / d;
    (0..d).map(|n| CMat::from_fn(dl, m.ncols(), |a, b| m[(n * dl + a, b)])).collect()
}

/// Stacks the site into a D_l × (d·D_r) matrix with column n·D_r + β.
pub(crate) fn stack_cols(site: &[CMat]) -> CMat {
    let (dl, dr) = (site[0].nrows(), site[0].ncols());
    CMat::from_fn(dl, site.len() * dr, |a, c| site[c / dr][(a, c % dr)])
}

pub(crate) fn unstack_cols(m: &CMat, d: usize) -> Vec<CMat> {
    let dr = m.ncols() / d;
    (0..d).map(|n| CMat::from_fn(m.nrows(), dr, |a, b| m[(a, n * dr + b)])).collect()
}

/// QR with the diagonal of R made real and nonnegative, so an input with
/// orthonormal columns comes back unchanged with R = 1.
pub(crate) fn positive_qr(m: &CMat) -> (CMat, CMat) {
    let (mut q, mut r) = qr(m);
    for j in 0..r.nrows() {
        let x = r[(j, j)];
        let phase = if x.norm() > 0.0 { x / x.norm() } else { ONE };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
        for c in 0..r.ncols() {
            r[(j, c)] *= phase.conj();
        }
    }
    (q, r)
}

fn require_open(mps: &MpsState) -> Result<()> {
    if mps.boundary() != MpsBoundary::Open {
        return arg("canonical forms are defined for open boundaries only");
    }
    Ok(())
}

/// Left-to-right QR sweep; the final scalar (the norm) is dropped, so the
/// output is normalized and satisfies Σ_n A^n†A^n = 1 at every site.
pub fn left_canonicalize(mps: &MpsState) -> Result<MpsState> {
    require_open(mps)?;
    let d = mps.phys_dim();
    let mut out = mps.clone();
    let mut carry: Option<CMat> = None;
    for m in 0..mps.n_sites() {
        let site: Vec<CMat> = match &carry {
            Some(r) => mps.site(m).iter().map(|a| r * a).collect(),
            None => mps.site(m).to_vec(),
        };
        let (q, r) = positive_qr(&stack_rows(&site));
        *out.site_mut(m) = unstack_rows(&q, d);
        carry = Some(r);
    }
    let norm = carry.map_or(0.0, |r| r[(0, 0)].re);
    if !(norm > 1e-300) || !norm.is_finite() {
        return Err(Error::DegenerateInput("zero-norm MPS".into()));
    }
    Ok(out.with_gauge(Gauge::LeftCanonical))
}

/// Right-to-left sweep leaving Σ_n A^n A^n† = 1 at every site; normalized.
pub fn right_canonicalize(mps: &MpsState) -> Result<MpsState> {
    require_open(mps)?;
    let d = mps.phys_dim();
    let mut out = mps.clone();
    let mut carry: Option<CMat> = None;
    for m in (0..mps.n_sites()).rev() {
        let site: Vec<CMat> = match &carry {
            Some(l) => mps.site(m).iter().map(|a| a * l).collect(),
            None => mps.site(m).to_vec(),
        };
        let (q, r) = positive_qr(&adjoint(&stack_cols(&site)));
        *out.site_mut(m) = unstack_cols(&adjoint(&q), d);
        carry = Some(adjoint(&r));
    }
    let norm = carry.map_or(0.0, |l| l[(0, 0)].re);
    if !(norm > 1e-300) || !norm.is_finite() {
        return Err(Error::DegenerateInput("zero-norm MPS".into()));
    }
    Ok(out)
}

/// Result of compressing a dense state.
#[derive(Debug, Clone)]
pub struct Compression {
    pub mps: MpsState,
    /// Σ over cuts of the discarded squared Schmidt coefficients.
    pub discarded_weight: f64,
}

/// Sequential Schmidt factorization keeping at most `d_max` values above
/// `tol` per cut. Fidelity of the result with `psi` is 1 − discarded weight.
pub fn dense_to_mps(psi: &PureState, d_max: usize, tol: f64) -> Result<Compression> {
    let dims = psi.space().dims();
    let d = dims[0];
    if dims.iter().any(|&x| x != d) {
        return arg("dense_to_mps needs a uniform local dimension");
    }
    if d_max == 0 {
        return arg("D_max must be at least 1");
    }
    let n = dims.len();
    let amps = psi.amplitudes();
    // Rows (α, n_m) as α·d + n_m, columns the remaining sites.
    let mut rest = amps.len() / d;
    let mut cur = CMat::from_fn(d, rest, |r, c| amps[r * rest + c]);
    let mut tensors = Vec::with_capacity(n);
    let mut discarded = 0.0;
    for _ in 0..n - 1 {
        let dl = cur.nrows() / d;
        let (u, s, v) = svd(&cur)?;
        let keep = s.iter().take(d_max).filter(|&&x| x > tol).count().max(1);
        discarded += s[keep..].iter().map(|x| x * x).sum::<f64>();
        tensors.push((0..d).map(|k| CMat::from_fn(dl, keep, |a, b| u[(a * d + k, b)])).collect());
        // S V† restricted to the kept values, refolded with the next site.
        let sv = CMat::from_fn(keep, cur.ncols(), |b, c| v[(c, b)].conj() * s[b]);
        rest /= d;
        cur = CMat::from_fn(keep * d, rest, |r, c| sv[(r / d, (r % d) * rest + c)]);
    }
    let dl = cur.nrows() / d;
    let norm: f64 = (0..cur.nrows()).map(|r| cur[(r, 0)].norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-300) {
        return Err(Error::DegenerateInput("state vanishes after truncation".into()));
    }
    tensors.push((0..d).map(|k| CMat::from_fn(dl, 1, |a, _| cur[(a * d + k, 0)] / c64::new(norm, 0.0))).collect());
    let mps = MpsState::new(tensors, MpsBoundary::Open)?.with_gauge(Gauge::LeftCanonical);
    Ok(Compression { mps, discarded_weight: discarded })
}
