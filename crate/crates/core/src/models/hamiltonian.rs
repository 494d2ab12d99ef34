//! Local Hamiltonians H = Σ h_{i,j} on a lattice of qudits.

use std::collections::HashMap;

use num_complex::Complex64 as c64;

use crate::error::{arg, Error, Result};
use crate::linalg::{hermiticity_residual, trace_norm_hermitian, trace_product, zeros, CMat, ZERO};
use crate::state::{Lattice, SiteSpace, State};

/// Largest dimension accepted by the exact solvers.
pub const EXACT_DIMENSION_CAP: usize = 1 << 14;

/// One few-site term h acting on `sites` (first listed slowest).
#[derive(Debug, Clone)]
pub struct Term {
    pub sites: Vec<usize>,
    pub matrix: CMat,
}

#[derive(Debug, Clone)]
pub struct LocalHamiltonian {
    space: SiteSpace,
    lattice: Lattice,
    terms: Vec<Term>,
    term_bound: f64,
}

/// Nonzero matrix elements grouped by column: `columns[i]` holds (j, H_{j,i}).
pub(crate) type SparseColumns = Vec<Vec<(usize, c64)>>;

impl LocalHamiltonian {
    /// Validates Hermiticity and support of every term; the term bound is
    /// the largest trace norm ‖h‖₁.
    pub fn new(space: SiteSpace, lattice: Lattice, terms: Vec<Term>) -> Result<Self> {
        if lattice.n_sites() != space.n_sites() {
            return arg(format!("lattice has {} sites, space has {}", lattice.n_sites(), space.n_sites()));
        }
        let mut term_bound = 0.0f64;
        for (k, t) in terms.iter().enumerate() {
            space.check_sites(&t.sites)?;
            let d = space.dim_of(&t.sites);
            if t.matrix.nrows() != d || t.matrix.ncols() != d {
                return arg(format!("term {k} is {}x{} but its sites span {d}", t.matrix.nrows(), t.matrix.ncols()));
            }
            let r = hermiticity_residual(&t.matrix);
            if r > 1e-10 {
                return arg(format!("term {k} is not Hermitian (residual {r:e})"));
            }
            term_bound = term_bound.max(trace_norm_hermitian(&t.matrix)?);
        }
        Ok(Self { space, lattice, terms, term_bound })
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// h = max ‖h_{i,j}‖₁.
    pub fn term_bound(&self) -> f64 {
        self.term_bound
    }

    pub fn n_sites(&self) -> usize {
        self.space.n_sites()
    }

    /// ⟨H⟩ summed term by term from marginals.
    pub fn energy<S: State + ?Sized>(&self, state: &S) -> Result<f64> {
        Ok(self.term_energies(state)?.iter().sum())
    }

    /// ⟨h_k⟩ for every term, in term order.
    pub fn term_energies<S: State + ?Sized>(&self, state: &S) -> Result<Vec<f64>> {
        self.terms
            .iter()
            .map(|t| Ok(trace_product(&state.reduced_matrix(&t.sites)?, &t.matrix).re))
            .collect()
    }

    /// Copy with every site index shifted by `shift` modulo the site count.
    pub fn translated(&self, shift: usize) -> Result<Self> {
        let n = self.n_sites();
        let terms = self
            .terms
            .iter()
            .map(|t| Term { sites: t.sites.iter().map(|&s| (s + shift) % n).collect(), matrix: t.matrix.clone() })
            .collect();
        Self::new(self.space.clone(), self.lattice.clone(), terms)
    }

    fn check_cap(&self) -> Result<()> {
        if self.space.dim() > EXACT_DIMENSION_CAP {
            return Err(Error::Capacity(format!(
                "dimension {} exceeds the exact-solver cap {EXACT_DIMENSION_CAP}",
                self.space.dim()
            )));
        }
        Ok(())
    }

    /// Nonzero matrix elements of H, duplicates summed.
    pub(crate) fn sparse_columns(&self) -> Result<SparseColumns> {
        self.check_cap()?;
        let dim = self.space.dim();
        let strides = self.space.strides();
        let mut cols: Vec<HashMap<usize, c64>> = vec![HashMap::new(); dim];
        for t in &self.terms {
            let offs = self.space.offsets(&t.sites);
            let k = offs.len();
            let local_dims: Vec<usize> = t.sites.iter().map(|&s| self.space.dims()[s]).collect();
            for (i, col) in cols.iter_mut().enumerate() {
                let mut a = 0;
                for (&s, &d) in t.sites.iter().zip(&local_dims) {
                    a = a * d + (i / strides[s]) % self.space.dims()[s];
                }
                let base = i - offs[a];
                for b in 0..k {
                    let v = t.matrix[(b, a)];
                    if v != ZERO {
                        *col.entry(base + offs[b]).or_insert(ZERO) += v;
                    }
                }
            }
        }
        Ok(cols
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, c64)> = m.into_iter().filter(|(_, x)| *x != ZERO).collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect())
    }

    /// Dense matrix of H.
    pub fn dense(&self) -> Result<CMat> {
        let cols = self.sparse_columns()?;
        let n = self.space.dim();
        let mut m = zeros(n, n);
        for (i, col) in cols.iter().enumerate() {
            for &(j, v) in col {
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }
}
