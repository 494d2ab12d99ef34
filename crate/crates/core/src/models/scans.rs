//! Parameter scans of ground-state quantities across a field grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Result};
use crate::measures::negativity;
use crate::state::RegionPartition;
use crate::table::{Cell, Table};

use super::builders::{build_model, ModelSpec};
use super::spectrum::{ground_state, SpectrumResult};

pub const DEFAULT_OVERLAP_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct OverlapPoint {
    pub b: f64,
    /// |⟨Ψ(B + ε)|Ψ(B)⟩|, absent when either ground space is degenerate.
    pub fidelity: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairPoint {
    pub b: f64,
    pub negativity: f64,
    /// Central difference on the grid (one-sided at the ends).
    pub derivative: Option<f64>,
    /// The ground space was degenerate and the flip-even vector was used.
    pub degenerate: bool,
}

fn solve(spec: &ModelSpec, b: f64) -> Result<SpectrumResult> {
    ground_state(&build_model(&spec.with_field(b))?)
}

/// Ground-state overlap between neighbouring fields B and B + ε.
pub fn overlap_scan(spec: &ModelSpec, grid: &[f64], epsilon: f64) -> Result<Vec<OverlapPoint>> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return arg(format!("epsilon = {epsilon} must be finite and nonnegative"));
    }
    grid.par_iter()
        .map(|&b| {
            let s0 = solve(spec, b)?;
            let s1 = if epsilon == 0.0 { s0.clone() } else { solve(spec, b + epsilon)? };
            let degenerate = s0.ground_degeneracy > 1 || s1.ground_degeneracy > 1;
            let fidelity = (!degenerate).then(|| s0.ground_vectors[0].overlap(&s1.ground_vectors[0]).norm());
            Ok(OverlapPoint { b, fidelity, degenerate })
        })
        .collect()
}

/// Negativity of the reduced state of `pair` in the ground state along the
/// grid. Degenerate points use the flip-even ground vector.
pub fn two_site_entanglement_scan(spec: &ModelSpec, grid: &[f64], pair: (usize, usize)) -> Result<Vec<PairPoint>> {
    if pair.0 == pair.1 || pair.0 >= spec.n || pair.1 >= spec.n {
        return arg(format!("invalid site pair {pair:?} for n = {}", spec.n));
    }
    let cut = RegionPartition::chain(2, &[0])?;
    let mut points: Vec<PairPoint> = grid
        .par_iter()
        .map(|&b| {
            let s = solve(spec, b)?;
            let rho = s.even_ground_vector().marginal(&[pair.0, pair.1])?;
            Ok(PairPoint { b, negativity: negativity(&rho, &cut)?, derivative: None, degenerate: s.ground_degeneracy > 1 })
        })
        .collect::<Result<_>>()?;
    let n = points.len();
    if n >= 2 {
        for i in 0..n {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            let db = points[hi].b - points[lo].b;
            if db != 0.0 {
                points[i].derivative = Some((points[hi].negativity - points[lo].negativity) / db);
            }
        }
    }
    Ok(points)
}

pub fn overlap_table(points: &[OverlapPoint]) -> Table {
    let mut t = Table::new(&["b", "fidelity", "degenerate"]);
    for p in points {
        t.push(vec![Cell::Num(p.b), p.fidelity.map_or(Cell::Empty, Cell::Num), Cell::Bool(p.degenerate)]);
    }
    t
}

pub fn pair_table(points: &[PairPoint]) -> Table {
    let mut t = Table::new(&["b", "negativity", "derivative", "degenerate"]);
    for p in points {
        t.push(vec![
            Cell::Num(p.b),
            Cell::Num(p.negativity),
            p.derivative.map_or(Cell::Empty, Cell::Num),
            Cell::Bool(p.degenerate),
        ]);
    }
    t
}
