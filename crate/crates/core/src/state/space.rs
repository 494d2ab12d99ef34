use serde::Serialize;

use crate::error::{arg, Error, Result};

/// Default cap on the total Hilbert-space dimension of a dense state.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 20;

/// Local dimensions of an ordered list of sites.
///
/// Basis states are ordered lexicographically with site 0 as the slowest
/// index: the digit of site `k` in a flat index has weight
/// `dims[k+1] * ... * dims[N-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteSpace {
    dims: Vec<usize>,
}

impl SiteSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return arg("a site space needs at least one site");
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return arg(format!("local dimension {d} < 2"));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::Capacity(format!("total dimension of {dims:?} exceeds cap {cap}")))?;
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Product dimension of a subset of sites.
    pub fn dim_of(&self, sites: &[usize]) -> usize {
        sites.iter().map(|&s| self.dims[s]).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Flat-index contribution of every configuration of `sites`, enumerated
    /// with the first listed site slowest.
    pub fn offsets(&self, sites: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &s in sites {
            let mut next = Vec::with_capacity(out.len() * self.dims[s]);
            for &base in &out {
                for digit in 0..self.dims[s] {
                    next.push(base + digit * strides[s]);
                }
            }
            out = next;
        }
        out
    }

    /// Digits of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &n)| acc * n + d)
    }

    pub fn concat(&self, other: &SiteSpace) -> Result<SiteSpace> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SiteSpace::new(dims)
    }

    /// Sub-space made of the listed sites, in the listed order.
    pub fn restrict(&self, sites: &[usize]) -> Result<SiteSpace> {
        SiteSpace::new(sites.iter().map(|&s| self.dims[s]).collect())
    }

    pub(crate) fn check_sites(&self, sites: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n_sites()];
        for &s in sites {
            if s >= self.n_sites() {
                return arg(format!("site {s} out of range for {} sites", self.n_sites()));
            }
            if seen[s] {
                return arg(format!("site {s} listed twice"));
            }
            seen[s] = true;
        }
        Ok(())
    }
}

/// Adjacency of the lattice the sites live on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Lattice {
    Chain { n: usize, periodic: bool },
    Graph { n: usize, edges: Vec<(usize, usize)> },
}

impl Lattice {
    pub fn open_chain(n: usize) -> Self {
        Lattice::Chain { n, periodic: false }
    }

    pub fn periodic_chain(n: usize) -> Self {
        Lattice::Chain { n, periodic: true }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            Lattice::Chain { n, .. } | Lattice::Graph { n, .. } => *n,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Lattice::Chain { n, periodic } => {
                let mut e: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
                if *periodic && *n > 2 {
                    e.push((n - 1, 0));
                }
                e
            }
            Lattice::Graph { edges, .. } => edges.clone(),
        }
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges()
            .iter()
            .any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
    }
}

/// Which side of a partition to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Keep {
    A,
    B,
}

/// A bipartition of the sites into region A and its complement B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionPartition {
    region_a: Vec<usize>,
    region_b: Vec<usize>,
    boundary_count: usize,
}

impl RegionPartition {
    /// Partition with the boundary counted on `lattice`.
    pub fn new(region_a: &[usize], lattice: &Lattice) -> Result<Self> {
        let n = lattice.n_sites();
        let mut a = region_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != region_a.len() {
            return arg("region A lists a site twice");
        }
        if a.is_empty() {
            return arg("region A is empty");
        }
        if a.len() >= n {
            return arg("region A must be a strict subset of the sites");
        }
        if let Some(&s) = a.iter().find(|&&s| s >= n) {
            return arg(format!("site {s} out of range for {n} sites"));
        }
        let b: Vec<usize> = (0..n).filter(|s| a.binary_search(s).is_err()).collect();
        let edges = lattice.edges();
        let boundary_count = a
            .iter()
            .filter(|&&s| {
                edges.iter().any(|&(x, y)| {
                    (x == s && b.binary_search(&y).is_ok()) || (y == s && b.binary_search(&x).is_ok())
                })
            })
            .count();
        Ok(Self { region_a: a, region_b: b, boundary_count })
    }

    /// Partition of an open chain of `n` sites (boundary counted on that chain).
    pub fn chain(n: usize, region_a: &[usize]) -> Result<Self> {
        Self::new(region_a, &Lattice::open_chain(n))
    }

    /// Sites `start .. start+len` (mod n) of a periodic chain.
    pub fn periodic_block(n: usize, start: usize, len: usize) -> Result<Self> {
        let a: Vec<usize> = (0..len).map(|k| (start + k) % n).collect();
        Self::new(&a, &Lattice::periodic_chain(n))
    }

    pub fn region_a(&self) -> &[usize] {
        &self.region_a
    }

    pub fn region_b(&self) -> &[usize] {
        &self.region_b
    }

    pub fn kept(&self, keep: Keep) -> &[usize] {
        match keep {
            Keep::A => &self.region_a,
            Keep::B => &self.region_b,
        }
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn n_sites(&self) -> usize {
        self.region_a.len() + self.region_b.len()
    }

    pub(crate) fn check(&self, space: &SiteSpace) -> Result<()> {
        if self.n_sites() != space.n_sites() {
            return arg(format!(
                "partition covers {} sites but the state has {}",
                self.n_sites(),
                space.n_sites()
            ));
        }
        Ok(())
    }
}
