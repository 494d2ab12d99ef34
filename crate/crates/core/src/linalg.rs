//! Dense complex linear algebra on top of `faer`.

use faer::{Mat, Side};
use num_complex::Complex64 as c64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64::new(0.0, 0.0);
pub const ONE: c64 = c64::new(1.0, 0.0);
pub const I: c64 = c64::new(0.0, 1.0);

pub fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    Mat::zeros(r, c)
}

/// Builds a matrix from row-major nested slices.
pub fn from_rows(rows: &[&[c64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| re(rows[i][j]))
}

pub fn diag(values: &[f64]) -> CMat {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { re(values[i]) } else { ZERO })
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint().to_owned()
}

pub fn scale(m: &CMat, s: c64) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn kron_all(ops: &[CMat]) -> CMat {
    let mut out = identity(1);
    for op in ops {
        out = kron(&out, op);
    }
    out
}

pub fn trace(m: &CMat) -> c64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// tr(A B) without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> c64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs_entry(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            best = best.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    best
}

/// Largest |A - A†| entry.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut best = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    best
}

/// (A + A†)/2.
pub fn hermitize(m: &CMat) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

fn is_real(m: &CMat) -> bool {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)].im != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and
/// eigenvectors as columns. Real symmetric inputs take the real solver.
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = m.nrows();
    if is_real(m) {
        let r = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        let e = r
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigendecomposition: {e:?}")))?;
        let vals = (0..n).map(|i| e.S().column_vector()[i]).collect();
        let u = e.U();
        return Ok((vals, Mat::from_fn(n, n, |i, j| re(u[(i, j)]))));
    }
    let h = hermitize(m);
    let e = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition: {e:?}")))?;
    let vals = (0..n).map(|i| e.S().column_vector()[i].re).collect();
    Ok((vals, e.U().to_owned()))
}

pub fn eigvalsh(m: &CMat) -> Result<Vec<f64>> {
    let n = m.nrows();
    if is_real(m) {
        let r = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        return r
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigenvalues: {e:?}")));
    }
    let h = hermitize(m);
    h.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigenvalues: {e:?}")))
}

/// Thin SVD: (U, singular values descending, V) with A = U diag(s) V†.
pub fn svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let s = m
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let k = m.nrows().min(m.ncols());
    let vals: Vec<f64> = (0..k).map(|i| s.S().column_vector()[i].re).collect();
    Ok((s.U().to_owned(), vals, s.V().to_owned()))
}

pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = m
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Thin QR: A = Q R with Q having orthonormal columns.
pub fn qr(m: &CMat) -> (CMat, CMat) {
    let f = m.qr();
    (f.compute_thin_Q(), f.thin_R().to_owned())
}

/// Inverse through a partially pivoted LU factorization.
pub fn inverse(m: &CMat) -> CMat {
    use faer::linalg::solvers::DenseSolveCore;
    m.partial_piv_lu().inverse()
}

/// f(A) for Hermitian A through its spectrum.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, u) = eigh(m)?;
    let n = m.nrows();
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] * f(vals[j]));
    Ok(&scaled * u.adjoint())
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMat) -> Result<f64> {
    Ok(eigvalsh(m)?.iter().map(|x| x.abs()).sum())
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Unitary factor W V† of the polar decomposition A = (W V†)(V S V†).
pub fn polar_unitary(m: &CMat) -> Result<CMat> {
    let (u, _, v) = svd(m)?;
    Ok(&u * v.adjoint())
}

/// −Σ p log₂ p over strictly positive entries.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c64::new(a, b)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = Mat::from_fn(n, n, |_, _| complex_gaussian(rng));
    let (q, r) = qr(&g);
    Mat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        q[(i, j)] * phase
    })
}

pub fn matvec(m: &CMat, v: &[c64]) -> Vec<c64> {
    let mut out = vec![ZERO; m.nrows()];
    for j in 0..m.ncols() {
        let x = v[j];
        if x == ZERO {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += m[(i, j)] * x;
        }
    }
    out
}

pub fn inner(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[c64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn column(m: &CMat, j: usize) -> Vec<c64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

/// |v⟩⟨w|.
pub fn outer(v: &[c64], w: &[c64]) -> CMat {
    Mat::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
}
