use serde::Serialize;

use crate::error::{arg, Result};
use crate::measures::entanglement_entropy;
use crate::state::{Lattice, PureState, RegionPartition};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Serialize)]
pub struct AreaScanRecord {
    /// Block length ℓ in sites.
    pub length: usize,
    pub start: usize,
    /// N_∂A on the lattice.
    pub boundary_count: usize,
    /// Entropy or mutual information in bits.
    pub value: f64,
    pub tag: String,
}

/// Sites start, …, start + len − 1, wrapping on periodic chains.
pub fn contiguous_block(lattice: &Lattice, start: usize, len: usize) -> Result<RegionPartition> {
    let n = lattice.n_sites();
    let periodic = matches!(lattice, Lattice::Chain { periodic: true, .. });
    if !matches!(lattice, Lattice::Chain { .. }) {
        return arg("contiguous blocks need a chain lattice");
    }
    if len == 0 || len >= n {
        return arg(format!("block length {len} must lie in 1..{n}"));
    }
    if !periodic && start + len > n {
        return arg(format!("block {start}..{} does not fit the open chain of {n} sites", start + len));
    }
    let sites: Vec<usize> = (0..len).map(|k| (start + k) % n).collect();
    RegionPartition::new(&sites, lattice)
}

/// Entanglement entropy of contiguous blocks of each requested length.
pub fn block_entropy_scan(psi: &PureState, lattice: &Lattice, start: usize, lengths: &[usize], tag: &str) -> Result<Vec<AreaScanRecord>> {
    if lattice.n_sites() != psi.space().n_sites() {
        return arg("lattice and state disagree on the site count");
    }
    lengths
        .iter()
        .map(|&len| {
            let part = contiguous_block(lattice, start, len)?;
            Ok(AreaScanRecord {
                length: len,
                start,
                boundary_count: part.boundary_count(),
                value: entanglement_entropy(psi, &part)?,
                tag: tag.to_owned(),
            })
        })
        .collect()
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return arg("slope fit needs at least two paired points");
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return arg("slope fit needs distinct abscissae");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Coefficient of log₂ ℓ in a least-squares fit of the block values.
pub fn fit_log_slope(records: &[AreaScanRecord]) -> Result<f64> {
    let x: Vec<f64> = records.iter().map(|r| (r.length as f64).log2()).collect();
    let y: Vec<f64> = records.iter().map(|r| r.value).collect();
    fit_slope(&x, &y)
}

pub fn area_table(records: &[AreaScanRecord]) -> Table {
    let mut t = Table::new(&["length", "start", "boundary_count", "value", "tag"]);
    for r in records {
        t.push(vec![
            Cell::Int(r.length as i64),
            Cell::Int(r.start as i64),
            Cell::Int(r.boundary_count as i64),
            Cell::Num(r.value),
            Cell::Text(r.tag.clone()),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dimer_state;
    use crate::state::SiteSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dimer_blocks() {
        let n = 8;
        let lat = Lattice::periodic_chain(n);
        let psi = dimer_state(n, 0).unwrap();
        let aligned = block_entropy_scan(&psi, &lat, 0, &[2, 4, 6], "dimer").unwrap();
        assert!(aligned.iter().all(|r| r.value.abs() < 1e-12));
        let shifted = block_entropy_scan(&psi, &lat, 1, &[2, 4, 6], "dimer").unwrap();
        // Each block edge cuts one singlet.
        assert!(shifted.iter().all(|r| (r.value - 2.0).abs() < 1e-12));
        let odd = block_entropy_scan(&psi, &lat, 0, &[1, 3, 5], "dimer").unwrap();
        assert!(odd.iter().all(|r| (r.value - 1.0).abs() < 1e-12));
        assert_eq!(shifted[0].boundary_count, 2);
        assert_eq!(odd[0].boundary_count, 1);
    }

    #[test]
    fn random_states_follow_a_volume_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = PureState::random(SiteSpace::qubits(10).unwrap(), &mut rng);
        let recs = block_entropy_scan(&psi, &Lattice::open_chain(10), 0, &[1, 2, 3, 4, 5], "haar").unwrap();
        let x: Vec<f64> = recs.iter().map(|r| r.length as f64).collect();
        let y: Vec<f64> = recs.iter().map(|r| r.value).collect();
        assert!(fit_slope(&x, &y).unwrap() > 0.5);
    }

    #[test]
    fn block_bounds() {
        assert!(contiguous_block(&Lattice::open_chain(4), 2, 3).is_err());
        assert!(contiguous_block(&Lattice::periodic_chain(4), 3, 2).is_ok());
        assert!(contiguous_block(&Lattice::periodic_chain(4), 0, 4).is_err());
    }
}
