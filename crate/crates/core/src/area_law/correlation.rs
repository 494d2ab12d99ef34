use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{arg, Result};
use crate::measures::mutual_information_between;
use crate::state::{Lattice, RegionPartition, State};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Serialize)]
pub struct RegionDecay {
    pub region_a: Vec<usize>,
    pub boundary_count: usize,
    /// (L, I_L(A)) with B_L the sites farther than L from A.
    pub decay: Vec<(usize, f64)>,
    /// First point where I_L(A) ≤ I_0(A)/2, linearly interpolated and
    /// floored at 1; `None` when the decay never halves on the grid.
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationLengthReport {
    /// max over regions of ξ_A; `None` stands for +∞.
    pub xi_i: Option<f64>,
    pub regions: Vec<RegionDecay>,
    /// I_{L=0}(A) ≤ 4 N_∂A ξ_I log₂ d for every region; `None` when ξ_I is infinite.
    pub bound_holds: Option<bool>,
}

fn distances(lattice: &Lattice, region: &[usize]) -> Vec<usize> {
    let n = lattice.n_sites();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in lattice.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in region {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(s) = queue.pop_front() {
        for &t in &adj[s] {
            if dist[t] == usize::MAX {
                dist[t] = dist[s] + 1;
                queue.push_back(t);
            }
        }
    }
    dist
}

fn halving_point(decay: &[(usize, f64)]) -> Option<f64> {
    let i0 = decay[0].1;
    let half = i0 / 2.0;
    for k in 0..decay.len() {
        if decay[k].1 <= half + 1e-12 {
            if k == 0 {
                return Some((decay[0].0 as f64).max(1.0));
            }
            let (l0, y0) = (decay[k - 1].0 as f64, decay[k - 1].1);
            let (l1, y1) = (decay[k].0 as f64, decay[k].1);
            let x = if y0 == y1 { l1 } else { l0 + (y0 - half) / (y0 - y1) * (l1 - l0) };
            return Some(x.max(1.0));
        }
    }
    None
}

/// Decay of I(A : B_L) with the separation L for each region A, where B_L
/// holds every site at lattice distance greater than L from A. The grid is
/// sorted and always starts at L = 0.
pub fn correlation_length<S: State + ?Sized>(
    state: &S,
    lattice: &Lattice,
    regions: &[Vec<usize>],
    separations: &[usize],
) -> Result<CorrelationLengthReport> {
    let n = state.space().n_sites();
    if lattice.n_sites() != n {
        return arg("lattice and state disagree on the site count");
    }
    if regions.is_empty() {
        return arg("at least one region is required");
    }
    let mut grid: Vec<usize> = separations.to_vec();
    grid.push(0);
    grid.sort_unstable();
    grid.dedup();
    let d_max = state.space().dims().iter().copied().max().unwrap_or(2) as f64;
    let mut out = Vec::with_capacity(regions.len());
    for region in regions {
        let part = RegionPartition::new(region, lattice)?;
        let dist = distances(lattice, part.region_a());
        let mut decay = Vec::with_capacity(grid.len());
        for &l in &grid {
            let b: Vec<usize> = (0..n).filter(|&s| dist[s] != usize::MAX && dist[s] > l).collect();
            let i = if b.is_empty() { 0.0 } else { mutual_information_between(state, part.region_a(), &b)? };
            decay.push((l, i));
        }
        let xi = halving_point(&decay);
        out.push(RegionDecay { region_a: part.region_a().to_vec(), boundary_count: part.boundary_count(), decay, xi });
    }
    let xi_i = out.iter().try_fold(0.0f64, |m, r| r.xi.map(|x| m.max(x)));
    let bound_holds = xi_i.map(|xi| {
        out.iter().all(|r| r.decay[0].1 <= 4.0 * r.boundary_count as f64 * xi * d_max.log2() + 1e-9)
    });
    Ok(CorrelationLengthReport { xi_i, regions: out, bound_holds })
}

pub fn correlation_table(report: &CorrelationLengthReport) -> Table {
    let mut t = Table::new(&["region_a", "separation", "mutual_information", "xi_a"]);
    for r in &report.regions {
        let region = r.region_a.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        for &(l, i) in &r.decay {
            t.push(vec![
                Cell::Text(region.clone()),
                Cell::Int(l as i64),
                Cell::Num(i),
                Cell::Num(r.xi.unwrap_or(f64::INFINITY)),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, gibbs_state, ModelKind, ModelSpec};
    use crate::state::PureState;

    #[test]
    fn product_state_has_minimal_length() {
        let psi = PureState::product(&vec![PureState::plus().amplitudes().to_vec(); 6]).unwrap();
        let r = correlation_length(&psi, &Lattice::open_chain(6), &[vec![0, 1]], &[1, 2]).unwrap();
        assert!(r.regions[0].decay.iter().all(|(_, i)| i.abs() < 1e-12), "{r:?}");
        assert_eq!(r.xi_i, Some(1.0));
        assert_eq!(r.bound_holds, Some(true));
    }

    #[test]
    fn gapped_thermal_chain_has_finite_length() {
        let h = build_model(&ModelSpec::new(ModelKind::TransverseIsing, 8).with_field(2.0)).unwrap();
        let rho = gibbs_state(&h, 0.5).unwrap();
        let lat = h.lattice().clone();
        let r = correlation_length(&rho, &lat, &[vec![0], vec![0, 1]], &[1, 2]).unwrap();
        let xi = r.xi_i.unwrap();
        assert!(xi >= 1.0 && xi.is_finite());
        assert_eq!(r.bound_holds, Some(true));
        for reg in &r.regions {
            let i0 = reg.decay[0].1;
            assert!(i0 > 0.0);
            // Decay is monotone in the separation (data processing).
            assert!(reg.decay.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
        }
    }

    #[test]
    fn interpolation() {
        assert_eq!(halving_point(&[(0, 1.0), (2, 0.6), (4, 0.2)]), Some(2.0 + 0.1 / 0.4 * 2.0));
        assert_eq!(halving_point(&[(0, 1.0), (2, 0.9)]), None);
    }
}
