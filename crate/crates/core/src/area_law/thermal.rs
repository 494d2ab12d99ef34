use std::f64::consts::LOG2_E;

use serde::Serialize;

use crate::error::{arg, Result};
use crate::linalg::eigvalsh;
use crate::linalg::shannon_bits;
use crate::measures::product_of_marginals;
use crate::models::{gibbs_state, LocalHamiltonian};
use crate::state::{DensityOperator, Lattice, RegionPartition, State};
use crate::table::{Cell, Table};

use super::blocks::contiguous_block;

/// Slack allowed on every inequality.
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct AreaCheck {
    pub region_a: Vec<usize>,
    pub boundary_count: usize,
    /// I(A:B) of the Gibbs state, bits.
    pub mutual_information: f64,
    /// N_∂A (h/T) log₂ e.
    pub bound: f64,
    /// (⟨H⟩_{ρ_A⊗ρ_B} − ⟨H⟩_{ρ_T}) log₂ e / T.
    pub intermediate: f64,
    /// Largest |⟨h⟩_{ρ_T} − ⟨h⟩_{ρ_A⊗ρ_B}| over terms not crossing the cut.
    pub bulk_residual: f64,
    /// I ≤ bound.
    pub pass: bool,
    /// I ≤ intermediate.
    pub intermediate_pass: bool,
    /// intermediate ≤ bound.
    pub intermediate_within_bound: bool,
}

fn entropy(m: &crate::linalg::CMat) -> Result<f64> {
    Ok(shannon_bits(&eigvalsh(m)?))
}

/// Every contiguous block of a chain (all starts on periodic chains).
pub fn contiguous_partitions(lattice: &Lattice) -> Result<Vec<RegionPartition>> {
    let n = lattice.n_sites();
    let periodic = matches!(lattice, Lattice::Chain { periodic: true, .. });
    let mut out = Vec::new();
    for len in 1..n {
        let starts = if periodic { n } else { n - len + 1 };
        for start in 0..starts {
            out.push(contiguous_block(lattice, start, len)?);
        }
    }
    Ok(out)
}

/// Checks I(A:B) ≤ N_∂A (h/T) log₂ e on the Gibbs state of `h` for every
/// partition, together with the free-energy inequality it comes from.
pub fn mutual_info_area_check(h: &LocalHamiltonian, t: f64, partitions: &[RegionPartition]) -> Result<Vec<AreaCheck>> {
    if !(t > 0.0) || !t.is_finite() {
        return arg(format!("temperature t = {t} must satisfy T > 0"));
    }
    let rho = gibbs_state(h, t)?;
    check_state(h, &rho, t, partitions)
}

pub(crate) fn check_state(h: &LocalHamiltonian, rho: &DensityOperator, t: f64, partitions: &[RegionPartition]) -> Result<Vec<AreaCheck>> {
    let space = rho.space();
    let s_ab = shannon_bits(&rho.eigenvalues()?);
    let thermal = h.term_energies(rho)?;
    partitions
        .iter()
        .map(|part| {
            part.check(space)?;
            let (a, b) = (part.region_a(), part.region_b());
            let ra = rho.reduced_matrix(a)?;
            let rb = rho.reduced_matrix(b)?;
            let mi = (entropy(&ra)? + entropy(&rb)? - s_ab).max(0.0);
            let prod = DensityOperator::from_parts_unchecked(space.clone(), product_of_marginals(space, a, &ra, b, &rb));
            let product = h.term_energies(&prod)?;
            let mut bulk_residual = 0.0f64;
            for (term, (x, y)) in h.terms().iter().zip(thermal.iter().zip(&product)) {
                let in_a = term.sites.iter().filter(|s| a.contains(s)).count();
                if in_a == 0 || in_a == term.sites.len() {
                    bulk_residual = bulk_residual.max((x - y).abs());
                }
            }
            let de: f64 = product.iter().sum::<f64>() - thermal.iter().sum::<f64>();
            let intermediate = de * LOG2_E / t;
            let bound = part.boundary_count() as f64 * h.term_bound() / t * LOG2_E;
            Ok(AreaCheck {
                region_a: a.to_vec(),
                boundary_count: part.boundary_count(),
                mutual_information: mi,
                bound,
                intermediate,
                bulk_residual,
                pass: mi <= bound + SLACK,
                intermediate_pass: mi <= intermediate + SLACK,
                intermediate_within_bound: intermediate <= bound + SLACK,
            })
        })
        .collect()
}

/// CSV of the checks; `with_pass` adds the pass/fail columns.
pub fn area_check_table(checks: &[AreaCheck], t: f64, with_pass: bool) -> Table {
    let mut cols = vec!["t", "region_a", "boundary_count", "mutual_information", "bound", "intermediate"];
    if with_pass {
        cols.extend(["pass", "intermediate_pass"]);
    }
    let mut table = Table::new(&cols);
    for c in checks {
        let region = c.region_a.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        let mut row = vec![
            Cell::Num(t),
            Cell::Text(region),
            Cell::Int(c.boundary_count as i64),
            Cell::Num(c.mutual_information),
            Cell::Num(c.bound),
            Cell::Num(c.intermediate),
        ];
        if with_pass {
            row.push(Cell::Bool(c.pass));
            row.push(Cell::Bool(c.intermediate_pass));
        }
        table.push(row);
    }
    table
}
