//! Block entropy of N free bosons spread uniformly over R sites, with the
//! block holding the first L sites.

use serde::Serialize;

use crate::error::{arg, Result};

/// Largest particle number for the exact binomial sum.
pub const FREE_BOSON_EXACT_MAX: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FreeBosonSpec {
    pub n: u64,
    pub r: u64,
    pub l: u64,
}

impl FreeBosonSpec {
    pub fn new(n: u64, r: u64, l: u64) -> Result<Self> {
        if n == 0 || r == 0 || l == 0 || l >= r {
            return arg(format!("free-boson spec needs N, R, L ≥ 1 and L < R, got N={n} R={r} L={l}"));
        }
        Ok(Self { n, r, l })
    }

    /// n₀ = N L / R.
    pub fn mean(&self) -> f64 {
        self.n as f64 * self.l as f64 / self.r as f64
    }

    /// σ² = N L (R − L) / R².
    pub fn variance(&self) -> f64 {
        let (n, r, l) = (self.n as f64, self.r as f64, self.l as f64);
        n * l * (r - l) / (r * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BosonMode {
    Exact,
    Gaussian,
}

/// S = −Σ p(n) log₂ p(n) for p(n) = C(N, n) qⁿ (1 − q)^{N−n}, q = L/R, or the
/// Gaussian approximation log₂ σ + ½ log₂(2πe).
pub fn free_boson_block_entropy(spec: FreeBosonSpec, mode: BosonMode) -> Result<f64> {
    let spec = FreeBosonSpec::new(spec.n, spec.r, spec.l)?;
    match mode {
        BosonMode::Gaussian => {
            Ok(0.5 * spec.variance().log2() + 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).log2())
        }
        BosonMode::Exact => {
            if spec.n > FREE_BOSON_EXACT_MAX {
                return arg(format!("exact mode supports N ≤ {FREE_BOSON_EXACT_MAX}, got {}", spec.n));
            }
            let n = spec.n as usize;
            let q = spec.l as f64 / spec.r as f64;
            let (lq, lp) = (q.ln(), (1.0 - q).ln());
            // ln k! for k ≤ N.
            let mut ln_fact = vec![0.0f64; n + 1];
            for k in 1..=n {
                ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
            }
            let mut s = 0.0;
            for k in 0..=n {
                let lnp = ln_fact[n] - ln_fact[k] - ln_fact[n - k] + k as f64 * lq + (n - k) as f64 * lp;
                let p = lnp.exp();
                if p > 0.0 {
                    s -= p * lnp;
                }
            }
            Ok(s / std::f64::consts::LN_2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn single_particle_is_binary_entropy() {
        for (r, l) in [(2, 1), (5, 2), (10, 9)] {
            let s = free_boson_block_entropy(FreeBosonSpec::new(1, r, l).unwrap(), BosonMode::Exact).unwrap();
            assert!((s - h2(l as f64 / r as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_matches_gaussian_for_many_particles() {
        let spec = FreeBosonSpec::new(10_000, 10_000, 1_000).unwrap();
        let e = free_boson_block_entropy(spec, BosonMode::Exact).unwrap();
        let g = free_boson_block_entropy(spec, BosonMode::Gaussian).unwrap();
        assert!((e - g).abs() < 0.02, "{e} vs {g}");
    }

    #[test]
    fn symmetric_under_complement() {
        let a = free_boson_block_entropy(FreeBosonSpec::new(37, 20, 6).unwrap(), BosonMode::Exact).unwrap();
        let b = free_boson_block_entropy(FreeBosonSpec::new(37, 20, 14).unwrap(), BosonMode::Exact).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs() {
        assert!(FreeBosonSpec::new(10, 5, 5).is_err());
        assert!(FreeBosonSpec::new(0, 5, 1).is_err());
        let big = FreeBosonSpec { n: 2_000_000, r: 10, l: 1 };
        assert!(free_boson_block_entropy(big, BosonMode::Exact).is_err());
    }
}
