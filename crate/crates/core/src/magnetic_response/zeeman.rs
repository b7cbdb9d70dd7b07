//! Zeeman splitting and ground-state moment of a pair.

use super::gtensor::{GTensorSet, PairOperators};
use crate::crystal_model::C64;
use crate::error::{Error, Result};
use crate::units::MU_B;
use nalgebra::{Matrix2, Vector3};

#[derive(Clone, Copy, Debug)]
pub struct FieldResponse {
    /// Field in atomic units (lab frame).
    pub b: Vector3<f64>,
    /// ΔE = μ_B √(Bᵀ G B), Hartree.
    pub splitting: f64,
    /// Ground-state moment in the principal-axis frame (columns of U).
    pub moment: Vector3<f64>,
    /// Same moment in the lab frame.
    pub moment_lab: Vector3<f64>,
}

pub fn zeeman_splitting(g: &GTensorSet, b: &Vector3<f64>) -> f64 {
    MU_B * (b.transpose() * g.big_g * b)[(0, 0)].max(0.0).sqrt()
}

pub fn zeeman(g: &GTensorSet, b: &Vector3<f64>) -> Result<FieldResponse> {
    let splitting = zeeman_splitting(g, b);
    if splitting <= 0.0 {
        return Err(Error::ZeroField);
    }
    let u = g.svd_tot.u;
    let bp = u.transpose() * b;
    let s2 = g.svd_tot.sigma.component_mul(&g.svd_tot.sigma);
    let moment = s2.component_mul(&bp) * (MU_B * MU_B / (2.0 * splitting));
    Ok(FieldResponse {
        b: *b,
        splitting,
        moment,
        moment_lab: u * moment,
    })
}

/// H = μ_B Σ_l B_l (2 S_l + L_l) on the pair.
pub fn pair_zeeman_hamiltonian(ops: &PairOperators, b: &Vector3<f64>) -> Matrix2<C64> {
    let mut h = Matrix2::zeros();
    for l in 0..3 {
        h += (ops.s[l] * C64::new(2.0, 0.0) + ops.l[l]) * C64::new(MU_B * b[l], 0.0);
    }
    h
}

/// Eigenvalue gap of the 2×2 pair Zeeman Hamiltonian.
pub fn pair_zeeman_splitting(ops: &PairOperators, b: &Vector3<f64>) -> f64 {
    let h = pair_zeeman_hamiltonian(ops, b);
    let e = h.symmetric_eigen().eigenvalues;
    (e[0] - e[1]).abs()
}
