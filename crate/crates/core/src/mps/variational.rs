//! Single-site variational ground-state search over open MPS.
//!
//! The Hamiltonian is encoded as a matrix product operator whose bond
//! channels are: "nothing placed yet", "term complete", and one channel per
//! operator-Schmidt component of every two-site term that crosses the bond.
//! Terms of any range are therefore exact; blocking sites is optional.

use std::collections::BTreeMap;

use num_complex::Complex64 as c64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::canonical::{left_canonicalize, positive_qr, right_canonicalize, stack_cols, stack_rows, unstack_cols, unstack_rows};
use super::contract::{push_left, push_right};
use super::tensor::{open_bond_dims, MpsBoundary, MpsState};
use crate::error::{arg, Error, Result};
use crate::linalg::{adjoint, eigh, identity, inner, kron, norm, svd, zeros, CMat, ZERO};
use crate::models::LocalHamiltonian;
use crate::state::{embed_operator, Lattice, SiteSpace};

#[derive(Debug, Clone, Serialize)]
pub struct VariationalOptions {
    pub bond_dim: usize,
    pub max_sweeps: usize,
    /// Stop once the energy changes by less than this between sweeps.
    pub tol: f64,
    pub seed: u64,
    /// Number of physical sites merged into one MPS site.
    pub block: usize,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self { bond_dim: 16, max_sweeps: 30, tol: 1e-10, seed: 0, block: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct VariationalResult {
    /// Left-canonical state on the (possibly blocked) chain.
    pub mps: MpsState,
    pub energy: f64,
    /// Energy after every local update, in order.
    pub energies: Vec<f64>,
    /// Energy at the end of each full sweep.
    pub sweep_energies: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
    pub block: usize,
}

/// Effective dimension above which the local problem is solved by Lanczos.
const DENSE_LOCAL_LIMIT: usize = 600;

/// Sparse MPO: per site the nonzero (left channel, right channel, operator).
pub(crate) struct Mpo {
    pub d: usize,
    pub sites: Vec<Vec<(usize, usize, CMat)>>,
    pub chi: Vec<usize>,
}

struct Channel {
    from: usize,
    to: usize,
    left: CMat,
    right: CMat,
}

/// Groups the terms by the (blocked) sites they touch and sums them.
fn blocked_terms(h: &LocalHamiltonian, block: usize) -> Result<(usize, usize, BTreeMap<Vec<usize>, CMat>)> {
    if !matches!(h.lattice(), Lattice::Chain { .. }) {
        return arg("the variational search needs a chain lattice");
    }
    let dims = h.space().dims();
    let d = dims[0];
    if dims.iter().any(|&x| x != d) {
        return arg("the variational search needs a uniform local dimension");
    }
    let n = dims.len();
    if block == 0 || n % block != 0 {
        return arg(format!("block size {block} does not divide {n} sites"));
    }
    let mut groups: BTreeMap<Vec<usize>, CMat> = BTreeMap::new();
    for term in h.terms() {
        let mut blocks: Vec<usize> = term.sites.iter().map(|s| s / block).collect();
        blocks.sort_unstable();
        blocks.dedup();
        if blocks.len() > 2 {
            return arg(format!("term on sites {:?} spans more than two MPS sites", term.sites));
        }
        let union: Vec<usize> = blocks.iter().flat_map(|b| b * block..(b + 1) * block).collect();
        let local = SiteSpace::new(vec![d; union.len()])?;
        let pos: Vec<usize> = term.sites.iter().map(|s| union.iter().position(|u| u == s).unwrap()).collect();
        let op = embed_operator(&local, &term.matrix, &pos)?;
        match groups.get_mut(&blocks) {
            Some(acc) => *acc += &op,
            None => {
                groups.insert(blocks, op);
            }
        }
    }
    Ok((n / block, d.pow(block as u32), groups))
}

pub(crate) fn build_mpo(h: &LocalHamiltonian, block: usize) -> Result<Mpo> {
    let (n, d, groups) = blocked_terms(h, block)?;
    let mut onsite: Vec<Option<CMat>> = vec![None; n];
    let mut channels = Vec::new();
    for (sites, op) in groups {
        if sites.len() == 1 {
            onsite[sites[0]] = Some(op);
            continue;
        }
        // h_{ab,a'b'} = Σ_k L_k[a,a'] R_k[b,b'] from the SVD of the
        // realigned matrix M[(a a'), (b b')].
        let m = CMat::from_fn(d * d, d * d, |r, c| op[((r / d) * d + c / d, (r % d) * d + c % d)]);
        let (u, s, v) = svd(&m)?;
        let scale = s.first().copied().unwrap_or(0.0);
        for (k, &sk) in s.iter().enumerate() {
            if sk <= 1e-14 * scale.max(1.0) {
                break;
            }
            channels.push(Channel {
                from: sites[0],
                to: sites[1],
                left: CMat::from_fn(d, d, |a, b| u[(a * d + b, k)] * sk),
                right: CMat::from_fn(d, d, |a, b| v[(a * d + b, k)].conj()),
            });
        }
    }
    // Channel slots on bond b (between sites b−1 and b): 0 start, then the
    // crossing channels, then the completed slot.
    let crossing: Vec<Vec<usize>> = (0..=n)
        .map(|b| (0..channels.len()).filter(|&c| channels[c].from < b && b <= channels[c].to).collect())
        .collect();
    let chi: Vec<usize> = crossing.iter().map(|c| c.len() + 2).collect();
    let slot = |b: usize, c: usize| 1 + crossing[b].iter().position(|&x| x == c).unwrap();
    let mut sites = Vec::with_capacity(n);
    for m in 0..n {
        let (done_l, done_r) = (chi[m] - 1, chi[m + 1] - 1);
        let mut w = vec![(0, 0, identity(d)), (done_l, done_r, identity(d))];
        if let Some(op) = &onsite[m] {
            w.push((0, done_r, op.clone()));
        }
        for (c, ch) in channels.iter().enumerate() {
            if ch.from == m {
                w.push((0, slot(m + 1, c), ch.left.clone()));
            } else if ch.to == m {
                w.push((slot(m, c), done_r, ch.right.clone()));
            } else if ch.from < m && m < ch.to {
                w.push((slot(m, c), slot(m + 1, c), identity(d)));
            }
        }
        sites.push(w);
    }
    Ok(Mpo { d, sites, chi })
}

fn is_identity(o: &CMat) -> bool {
    (0..o.nrows()).all(|i| (0..o.ncols()).all(|j| o[(i, j)] == if i == j { c64::new(1.0, 0.0) } else { ZERO }))
}

fn grow_left(env: &[CMat], site: &[CMat], w: &[(usize, usize, CMat)], chi_out: usize) -> Vec<CMat> {
    let dr = site[0].ncols();
    let mut out = vec![zeros(dr, dr); chi_out];
    for (a, b, o) in w {
        let op = if is_identity(o) { None } else { Some(o) };
        out[*b] += push_left(&env[*a], site, op);
    }
    out
}

fn grow_right(env: &[CMat], site: &[CMat], w: &[(usize, usize, CMat)], chi_out: usize) -> Vec<CMat> {
    let dl = site[0].nrows();
    let mut out = vec![zeros(dl, dl); chi_out];
    for (a, b, o) in w {
        let op = if is_identity(o) { None } else { Some(o) };
        out[*a] += push_right(&env[*b], site, op);
    }
    out
}

/// Local effective Hamiltonian on the site tensor, index n·D_l·D_r + α·D_r + β.
struct LocalProblem<'a> {
    left: &'a [CMat],
    right: &'a [CMat],
    w: &'a [(usize, usize, CMat)],
    d: usize,
    dl: usize,
    dr: usize,
}

impl LocalProblem<'_> {
    fn dim(&self) -> usize {
        self.d * self.dl * self.dr
    }

    fn dense(&self) -> CMat {
        let k = self.dim();
        let mut h = zeros(k, k);
        for (a, b, o) in self.w {
            let l = &self.left[*a];
            let r = &self.right[*b];
            if crate::linalg::max_abs_entry(l) == 0.0 || crate::linalg::max_abs_entry(r) == 0.0 {
                continue;
            }
            h += kron(o, &kron(l, &r.transpose().to_owned()));
        }
        h
    }

    /// y^{n'} = Σ O_{n'n} L X^n R.
    fn apply(&self, x: &[c64]) -> Vec<c64> {
        let (d, dl, dr) = (self.d, self.dl, self.dr);
        let xs: Vec<CMat> = (0..d).map(|n| CMat::from_fn(dl, dr, |a, b| x[n * dl * dr + a * dr + b])).collect();
        let mut ys = vec![zeros(dl, dr); d];
        for (a, b, o) in self.w {
            let l = &self.left[*a];
            let r = &self.right[*b];
            for n in 0..d {
                let col: Vec<(usize, c64)> = (0..d).map(|np| (np, o[(np, n)])).filter(|p| p.1 != ZERO).collect();
                if col.is_empty() {
                    continue;
                }
                let t = &(l * &xs[n]) * r;
                for (np, w) in col {
                    ys[np] += crate::linalg::scale(&t, w);
                }
            }
        }
        let mut y = vec![ZERO; x.len()];
        for n in 0..d {
            for a in 0..dl {
                for b in 0..dr {
                    y[n * dl * dr + a * dr + b] = ys[n][(a, b)];
                }
            }
        }
        y
    }
}

/// Lowest eigenpair of a Hermitian operator by restarted Lanczos with full
/// reorthogonalization. The start vector lies in every Krylov space, so the
/// returned value never exceeds its Rayleigh quotient.
pub(crate) fn lanczos_lowest(apply: impl Fn(&[c64]) -> Vec<c64>, start: &[c64], tol: f64) -> Result<(f64, Vec<c64>)> {
    let dim = start.len();
    let mut x: Vec<c64> = start.to_vec();
    let nx = norm(&x);
    if !(nx > 0.0) {
        return Err(Error::DegenerateInput("zero start vector".into()));
    }
    x.iter_mut().for_each(|v| *v /= nx);
    let krylov = dim.min(60);
    let mut best = (f64::INFINITY, x.clone());
    for _ in 0..50 {
        let mut basis: Vec<Vec<c64>> = vec![x.clone()];
        let mut images: Vec<Vec<c64>> = Vec::new();
        for k in 0..krylov {
            let y = apply(&basis[k]);
            images.push(y.clone());
            if k + 1 == krylov {
                break;
            }
            let mut r = y;
            for _ in 0..2 {
                for q in &basis {
                    let c = inner(q, &r);
                    r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= c * qi);
                }
            }
            let nr = norm(&r);
            if nr < 1e-13 {
                break;
            }
            r.iter_mut().for_each(|v| *v /= nr);
            basis.push(r);
        }
        let k = images.len();
        let t = CMat::from_fn(k, k, |i, j| inner(&basis[i], &images[j]));
        let (vals, vecs) = eigh(&t)?;
        let mut ritz = vec![ZERO; dim];
        let mut image = vec![ZERO; dim];
        for j in 0..k {
            let c = vecs[(j, 0)];
            ritz.iter_mut().zip(&basis[j]).for_each(|(r, b)| *r += c * b);
            image.iter_mut().zip(&images[j]).for_each(|(r, b)| *r += c * b);
        }
        let nr = norm(&ritz);
        ritz.iter_mut().for_each(|v| *v /= nr);
        image.iter_mut().for_each(|v| *v /= nr);
        let residual = norm(&image.iter().zip(&ritz).map(|(a, b)| a - b * vals[0]).collect::<Vec<_>>());
        if vals[0] <= best.0 {
            best = (vals[0], ritz.clone());
        }
        if residual < tol || k < krylov {
            break;
        }
        x = ritz;
    }
    Ok(best)
}

fn solve_local(p: &LocalProblem, current: &[CMat]) -> Result<(f64, Vec<c64>)> {
    if p.dim() <= DENSE_LOCAL_LIMIT {
        let (vals, vecs) = eigh(&p.dense())?;
        return Ok((vals[0], crate::linalg::column(&vecs, 0)));
    }
    let mut start = vec![ZERO; p.dim()];
    for (n, a) in current.iter().enumerate() {
        for i in 0..p.dl {
            for j in 0..p.dr {
                start[n * p.dl * p.dr + i * p.dr + j] = a[(i, j)];
            }
        }
    }
    lanczos_lowest(|x| p.apply(x), &start, 1e-10)
}

fn random_open_state(n: usize, d: usize, bond: usize, seed: u64) -> Result<MpsState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = open_bond_dims(n, d, bond);
    let tensors = (0..n)
        .map(|m| {
            (0..d)
                .map(|_| {
                    CMat::from_fn(dims[m], dims[m + 1], |_, _| {
                        let g: f64 = StandardNormal.sample(&mut rng);
                        c64::new(g, 0.0)
                    })
                })
                .collect()
        })
        .collect();
    MpsState::new(tensors, MpsBoundary::Open)
}

/// Sweeps back and forth optimizing one site tensor at a time with the
/// rest in mixed-canonical gauge, so the local norm matrix is the identity
/// and each update is an ordinary Hermitian eigenproblem.
pub fn variational_ground_search(h: &LocalHamiltonian, opts: &VariationalOptions) -> Result<VariationalResult> {
    if opts.bond_dim == 0 || opts.max_sweeps == 0 {
        return arg("bond dimension and sweep count must be positive");
    }
    let mpo = build_mpo(h, opts.block)?;
    let n = mpo.sites.len();
    let d = mpo.d;
    let mut mps = right_canonicalize(&random_open_state(n, d, opts.bond_dim, opts.seed)?)?;
    let unit = {
        let mut e = zeros(1, 1);
        e[(0, 0)] = c64::new(1.0, 0.0);
        e
    };
    let mut lenv: Vec<Vec<CMat>> = vec![Vec::new(); n + 1];
    let mut renv: Vec<Vec<CMat>> = vec![Vec::new(); n + 1];
    lenv[0] = vec![zeros(1, 1); mpo.chi[0]];
    lenv[0][0] = unit.clone();
    renv[n] = vec![zeros(1, 1); mpo.chi[n]];
    renv[n][mpo.chi[n] - 1] = unit;
    for m in (1..n).rev() {
        renv[m] = grow_right(&renv[m + 1], mps.site(m), &mpo.sites[m], mpo.chi[m]);
    }

    let mut energies = Vec::new();
    let mut sweep_energies: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    let optimize = |mps: &mut MpsState, m: usize, lenv: &[CMat], renv: &[CMat]| -> Result<f64> {
        let site = mps.site(m);
        let (dl, dr) = (site[0].nrows(), site[0].ncols());
        let p = LocalProblem { left: lenv, right: renv, w: &mpo.sites[m], d, dl, dr };
        let (e, x) = solve_local(&p, site)?;
        *mps.site_mut(m) = (0..d).map(|k| CMat::from_fn(dl, dr, |a, b| x[k * dl * dr + a * dr + b])).collect();
        Ok(e)
    };
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        if n == 1 {
            energies.push(optimize(&mut mps, 0, &lenv[0], &renv[1])?);
        }
        for m in 0..n.saturating_sub(1) {
            energies.push(optimize(&mut mps, m, &lenv[m], &renv[m + 1])?);
            let (q, r) = positive_qr(&stack_rows(mps.site(m)));
            *mps.site_mut(m) = unstack_rows(&q, d);
            let next: Vec<CMat> = mps.site(m + 1).iter().map(|a| &r * a).collect();
            *mps.site_mut(m + 1) = next;
            lenv[m + 1] = grow_left(&lenv[m], mps.site(m), &mpo.sites[m], mpo.chi[m + 1]);
        }
        for m in (1..n).rev() {
            energies.push(optimize(&mut mps, m, &lenv[m], &renv[m + 1])?);
            let (q, r) = positive_qr(&adjoint(&stack_cols(mps.site(m))));
            *mps.site_mut(m) = unstack_cols(&adjoint(&q), d);
            let l = adjoint(&r);
            let prev: Vec<CMat> = mps.site(m - 1).iter().map(|a| a * &l).collect();
            *mps.site_mut(m - 1) = prev;
            renv[m] = grow_right(&renv[m + 1], mps.site(m), &mpo.sites[m], mpo.chi[m]);
        }
        let e = *energies.last().unwrap();
        if let Some(&prev) = sweep_energies.last() {
            if (prev - e).abs() < opts.tol {
                sweep_energies.push(e);
                converged = true;
                break;
            }
        }
        sweep_energies.push(e);
        if n == 1 {
            converged = true;
            break;
        }
    }
    let energy = *energies.last().unwrap();
    Ok(VariationalResult {
        mps: left_canonicalize(&mps)?,
        energy,
        energies,
        sweep_energies,
        converged,
        sweeps,
        block: opts.block,
    })
}
