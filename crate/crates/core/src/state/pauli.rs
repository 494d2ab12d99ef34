//! Pauli operators.
//!
//! σ_z = |1⟩⟨1| − |0⟩⟨0|, the opposite sign of the usual convention, so that
//! σ_z = −i σ_x σ_y and |0⟩ is the −1 eigenvector.

use serde::Serialize;

use crate::error::{arg, Result};
use crate::linalg::{from_rows, from_real_rows, identity, re, CMat, I, ONE, ZERO};

pub fn sigma_x() -> CMat {
    from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> CMat {
    from_rows(&[&[ZERO, I], &[-I, ZERO]])
}

pub fn sigma_z() -> CMat {
    from_real_rows(&[&[-1.0, 0.0], &[0.0, 1.0]])
}

pub fn id2() -> CMat {
    identity(2)
}

/// |0⟩⟨0|, |1⟩⟨1| on a qubit.
pub fn projector(bit: usize) -> CMat {
    let mut p = crate::linalg::zeros(2, 2);
    p[(bit, bit)] = ONE;
    p
}

/// Unit vector in the xz-plane, stored as (n_x, n_z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    pub x: f64,
    pub z: f64,
}

impl Direction {
    pub fn new(x: f64, z: f64) -> Result<Self> {
        let n = (x * x + z * z).sqrt();
        if !((n - 1.0).abs() <= 1e-10) {
            return arg(format!("direction ({x}, {z}) is not a unit vector (norm {n})"));
        }
        Ok(Self { x, z })
    }

    /// Direction at angle `theta` from the z axis towards x.
    pub fn from_angle(theta: f64) -> Self {
        Self { x: theta.sin(), z: theta.cos() }
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.z * other.z
    }

    /// σ_n = n_x σ_x + n_z σ_z.
    pub fn sigma(&self) -> CMat {
        from_real_rows(&[&[-self.z, self.x], &[self.x, self.z]])
    }

    /// Eigenprojector of σ_n for eigenvalue +1 (`plus = true`) or −1.
    pub fn eigenprojector(&self, plus: bool) -> CMat {
        let s = if plus { 1.0 } else { -1.0 };
        let sig = self.sigma();
        CMat::from_fn(2, 2, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            (re(id) + sig[(i, j)] * s) * 0.5
        })
    }
}
