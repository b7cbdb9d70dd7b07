//! SU(2) re-mixing of a pair and the induced SO(3) frame change of its tensors.
//!
//! Re-mixing [ξ' ξ̄'] = [ξ ξ̄]·W maps every pair tensor g ↦ g·R(W) with
//! R_kj = ½ Tr(σ_k W σ_j W†).

use super::gtensor::Svd3;
use crate::band_solver::KramersPair;
use crate::crystal_model::hamiltonian::pauli;
use crate::crystal_model::C64;
use nalgebra::{Matrix2, Matrix3, Rotation3, UnitQuaternion};

fn sigma(a: usize) -> Matrix2<C64> {
    Matrix2::new(pauli(a, 0, 0), pauli(a, 0, 1), pauli(a, 1, 0), pauli(a, 1, 1))
}

/// W = w·1 − i(x σ_x + y σ_y + z σ_z) for a unit quaternion (w, x, y, z).
pub fn su2_from_quaternion(q: &UnitQuaternion<f64>) -> Matrix2<C64> {
    let i = C64::new(0.0, 1.0);
    Matrix2::identity() * C64::new(q.w, 0.0)
        - (sigma(0) * C64::new(q.i, 0.0) + sigma(1) * C64::new(q.j, 0.0) + sigma(2) * C64::new(q.k, 0.0)) * i
}

/// R_kj = ½ Tr(σ_k W σ_j W†).
pub fn so3_from_su2(w: &Matrix2<C64>) -> Matrix3<f64> {
    let wh = w.adjoint();
    Matrix3::from_fn(|k, j| 0.5 * (sigma(k) * w * sigma(j) * wh).trace().re)
}

/// A W in SU(2) whose frame change is the proper rotation `r`.
pub fn su2_from_so3(r: &Matrix3<f64>) -> Matrix2<C64> {
    let rot = Rotation3::from_matrix_unchecked(*r);
    let q = UnitQuaternion::from_rotation_matrix(&rot);
    let w = su2_from_quaternion(&q);
    if (so3_from_su2(&w) - r).abs().max() < 1e-8 {
        w
    } else {
        su2_from_quaternion(&q.inverse())
    }
}

/// Proper rotation closest to taking `g` onto `target` (orthogonal Procrustes on SO(3)).
pub fn procrustes_rotation(g: &Matrix3<f64>, target: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = (g.transpose() * target).svd(true, true);
    let (a, bt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let d = (a * bt).determinant().signum();
    a * Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, d)) * bt
}

/// Re-mixes `pair` so that its tensor `g` becomes g·R ≈ `target`.
pub fn align_pair(pair: &KramersPair, g: &Matrix3<f64>, target: &Matrix3<f64>) -> KramersPair {
    let r = procrustes_rotation(g, target);
    pair.remixed(&su2_from_so3(&r))
}

/// Re-mixes `pair` into the frame where g·R = ±U·Σ (R = ±Vᵀ, proper).
pub fn v_aligned_pair(pair: &KramersPair, svd: &Svd3) -> KramersPair {
    let mut r = svd.v.transpose();
    if r.determinant() < 0.0 {
        r = -r;
    }
    pair.remixed(&su2_from_so3(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band_solver::{select_pair, solve};
    use crate::magnetic_response::gtensor::spin_g;
    use crate::test_support::si;
    use nalgebra::{Quaternion, Vector3};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn su2_so3_round_trip(q in prop::array::uniform4(-1.0f64..1.0)) {
            prop_assume!(q.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            let w = su2_from_quaternion(&UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3])));
            prop_assert!((w * w.adjoint() - Matrix2::identity()).norm() < 1e-12);
            let r = so3_from_su2(&w);
            prop_assert!((r * r.transpose() - Matrix3::identity()).abs().max() < 1e-12);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
            prop_assert!((so3_from_su2(&su2_from_so3(&r)) - r).abs().max() < 1e-10);
        }
    }

    #[test]
    fn procrustes_recovers_rotation() {
        let g = Matrix3::new(1.2, 0.1, -0.3, 0.2, -0.7, 0.4, 0.0, 0.5, 0.9);
        let r = *Rotation3::from_scaled_axis(Vector3::new(0.3, -1.1, 0.4)).matrix();
        let got = procrustes_rotation(&g, &(g * r));
        assert!((got - r).abs().max() < 1e-12);
    }

    #[test]
    fn v_aligned_frame_is_principal() {
        let sol = solve(si(), &Vector3::new(0.07, 0.03, 0.11)).unwrap();
        let pair = select_pair(si(), &sol, "split-off").unwrap();
        let g = spin_g(&pair);
        let svd = Svd3::new(&g);
        let ga = spin_g(&v_aligned_pair(&pair, &svd));
        let us = svd.u * Matrix3::from_diagonal(&svd.sigma);
        assert!((ga - us).abs().max() < 1e-10 || (ga + us).abs().max() < 1e-10);
    }

    #[test]
    fn align_pair_reaches_target() {
        let sol = solve(si(), &Vector3::new(0.07, 0.03, 0.11)).unwrap();
        let pair = select_pair(si(), &sol, "split-off").unwrap();
        let g = spin_g(&pair);
        let r = *Rotation3::from_scaled_axis(Vector3::new(0.5, 0.2, -0.9)).matrix();
        let aligned = align_pair(&pair, &g, &(g * r));
        assert!((spin_g(&aligned) - g * r).abs().max() < 1e-10);
    }
}
