//! Exact diagonalization of local Hamiltonians.
//!
//! H is split into independent blocks before the dense eigensolver runs:
//! first into the two sectors of the global spin flip ⊗σ_x when H commutes
//! with it, then into connected components of its sparsity graph (for
//! example fixed-magnetization sectors). Eigenvectors of flip-symmetric
//! Hamiltonians therefore carry a definite parity.

use faer::Mat;
use num_complex::Complex64 as c64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Result};
use crate::linalg::{eigh, zeros, CMat, ZERO};
use crate::state::{DensityOperator, PureState};

use super::hamiltonian::{LocalHamiltonian, SparseColumns};

/// Eigenvalues within this distance of E₀ belong to the ground space.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Full spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    /// Orthonormal basis of the ground space.
    pub ground_vectors: Vec<PureState>,
    /// Eigenvalue of the global spin flip for each ground vector, when H
    /// commutes with it.
    pub ground_parities: Vec<Option<i8>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub gap: Option<f64>,
}

impl SpectrumResult {
    /// E₁ − E₀ above the ground space.
    pub fn gap(&self) -> Option<f64> {
        self.eigenvalues.get(self.ground_degeneracy).map(|e| e - self.ground_energy)
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary { ground_energy: self.ground_energy, ground_degeneracy: self.ground_degeneracy, gap: self.gap() }
    }

    /// The flip-even ground vector if there is one, otherwise the first.
    pub fn even_ground_vector(&self) -> &PureState {
        let idx = self.ground_parities.iter().position(|p| *p == Some(1)).unwrap_or(0);
        &self.ground_vectors[idx]
    }
}

/// Basis vector of a symmetry block: Σ coefficient · |index⟩.
type SymVector = Vec<(usize, f64)>;

struct Block {
    vectors: Vec<SymVector>,
    parity: Option<i8>,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl Block {
    fn expand(&self, column: &[c64], dim: usize) -> Vec<c64> {
        let mut out = vec![ZERO; dim];
        for (v, &a) in self.vectors.iter().zip(column) {
            for &(i, c) in v {
                out[i] += a * c;
            }
        }
        out
    }
}

/// Eigendecomposition of H organized by symmetry blocks.
pub(crate) struct Decomposition {
    dim: usize,
    blocks: Vec<Block>,
}

fn flip_symmetric(h: &LocalHamiltonian, cols: &SparseColumns) -> bool {
    if !h.space().is_qubits() {
        return false;
    }
    let last = h.space().dim() - 1;
    cols.iter().enumerate().all(|(i, col)| {
        let partner = &cols[last ^ i];
        col.len() == partner.len()
            && col.iter().all(|&(j, v)| partner.binary_search_by_key(&(last ^ j), |e| e.0).is_ok_and(|k| (partner[k].1 - v).norm() <= 1e-14))
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits one symmetry sector into connected components.
fn components(vectors: Vec<SymVector>, id_of: &[usize], cols: &SparseColumns) -> Vec<Vec<SymVector>> {
    let n = vectors.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, v) in vectors.iter().enumerate() {
        for &(i, _) in v {
            for &(j, _) in &cols[i] {
                let b = id_of[j];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<SymVector>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for (a, v) in vectors.into_iter().enumerate() {
        let r = find(&mut parent, a);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(v);
    }
    groups
}

fn block_matrix(vectors: &[SymVector], cols: &SparseColumns, dim: usize) -> CMat {
    let n = vectors.len();
    // Position and coefficient of each basis index inside this block.
    let mut pos = vec![usize::MAX; dim];
    let mut coef = vec![0.0; dim];
    for (a, v) in vectors.iter().enumerate() {
        for &(i, c) in v {
            pos[i] = a;
            coef[i] = c;
        }
    }
    let mut m: CMat = zeros(n, n);
    for (b, v) in vectors.iter().enumerate() {
        for &(i, ci) in v {
            for &(j, h) in &cols[i] {
                let a = pos[j];
                if a != usize::MAX {
                    m[(a, b)] += h * (ci * coef[j]);
                }
            }
        }
    }
    m
}

impl Decomposition {
    pub(crate) fn new(h: &LocalHamiltonian) -> Result<Self> {
        let cols = h.sparse_columns()?;
        let dim = h.space().dim();
        let mut sectors: Vec<(Option<i8>, Vec<SymVector>, Vec<usize>)> = Vec::new();
        if flip_symmetric(h, &cols) {
            let last = dim - 1;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for (sign, label) in [(1.0, 1i8), (-1.0, -1i8)] {
                let mut vectors = Vec::with_capacity(dim / 2);
                let mut id_of = vec![0usize; dim];
                for r in 0..dim {
                    let f = last ^ r;
                    if r < f {
                        id_of[r] = vectors.len();
                        id_of[f] = vectors.len();
                        vectors.push(vec![(r, s), (f, sign * s)]);
                    }
                }
                sectors.push((Some(label), vectors, id_of));
            }
        } else {
            sectors.push((None, (0..dim).map(|i| vec![(i, 1.0)]).collect(), (0..dim).collect()));
        }
        let mut pending: Vec<(Option<i8>, Vec<SymVector>)> = Vec::new();
        for (parity, vectors, id_of) in sectors {
            for group in components(vectors, &id_of, &cols) {
                pending.push((parity, group));
            }
        }
        let blocks = pending
            .into_par_iter()
            .map(|(parity, vectors)| {
                let m = block_matrix(&vectors, &cols, dim);
                let (eigenvalues, eigenvectors) = eigh(&m)?;
                Ok(Block { vectors, parity, eigenvalues, eigenvectors })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, blocks })
    }

    fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|b| b.eigenvalues.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub(crate) fn spectrum(&self, h: &LocalHamiltonian) -> Result<SpectrumResult> {
        let eigenvalues = self.eigenvalues();
        let e0 = eigenvalues[0];
        let mut ground: Vec<(f64, usize, usize)> = Vec::new();
        for (bi, b) in self.blocks.iter().enumerate() {
            for (k, &e) in b.eigenvalues.iter().enumerate() {
                if e - e0 <= DEGENERACY_TOL {
                    ground.push((e, bi, k));
                }
            }
        }
        ground.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut ground_vectors = Vec::with_capacity(ground.len());
        let mut ground_parities = Vec::with_capacity(ground.len());
        for &(_, bi, k) in &ground {
            let b = &self.blocks[bi];
            let col: Vec<c64> = (0..b.eigenvectors.nrows()).map(|r| b.eigenvectors[(r, k)]).collect();
            ground_vectors.push(PureState::normalized(h.space().clone(), b.expand(&col, self.dim))?);
            ground_parities.push(b.parity);
        }
        Ok(SpectrumResult {
            ground_degeneracy: ground.len(),
            ground_energy: e0,
            eigenvalues,
            ground_vectors,
            ground_parities,
        })
    }

    /// e^{−(H − E₀)/T}/Z, dropping weights below 1e-18 of the largest.
    pub(crate) fn gibbs(&self, h: &LocalHamiltonian, t: f64) -> Result<DensityOperator> {
        let e0 = self.eigenvalues()[0];
        let z: f64 = self.blocks.iter().flat_map(|b| b.eigenvalues.iter()).map(|e| (-(e - e0) / t).exp()).sum();
        let dim = self.dim;
        let blocks: Vec<Option<CMat>> = self
            .blocks
            .par_iter()
            .map(|b| {
                let kept: Vec<(usize, f64)> = b
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(k, e)| (k, (-(e - e0) / t).exp() / z))
                    .filter(|&(_, w)| w > 1e-18)
                    .collect();
                if kept.is_empty() {
                    return None;
                }
                let n = b.vectors.len();
                let u = Mat::from_fn(n, kept.len(), |r, c| b.eigenvectors[(r, kept[c].0)]);
                let uw = Mat::from_fn(n, kept.len(), |r, c| u[(r, c)] * kept[c].1);
                Some(&uw * u.adjoint())
            })
            .collect();
        let mut m = zeros(dim, dim);
        for (b, rho_b) in self.blocks.iter().zip(blocks) {
            let Some(rho_b) = rho_b else { continue };
            for (c, vc) in b.vectors.iter().enumerate() {
                for (a, va) in b.vectors.iter().enumerate() {
                    let x = rho_b[(a, c)];
                    for &(i, ci) in va {
                        for &(j, cj) in vc {
                            m[(i, j)] += x * (ci * cj);
                        }
                    }
                }
            }
        }
        DensityOperator::new(h.space().clone(), crate::linalg::hermitize(&m))
    }
}

/// Full spectrum and ground space of H.
pub fn ground_state(h: &LocalHamiltonian) -> Result<SpectrumResult> {
    Decomposition::new(h)?.spectrum(h)
}

/// ρ_T = e^{−H/T}/Z.
pub fn gibbs_state(h: &LocalHamiltonian, t: f64) -> Result<DensityOperator> {
    if !(t > 0.0) || !t.is_finite() {
        return arg(format!("temperature t = {t} must satisfy T > 0 (use ground_state for T = 0)"));
    }
    Decomposition::new(h)?.gibbs(h, t)
}
