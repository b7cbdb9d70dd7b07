//! Reduced spin density matrices of pair states, their von Neumann entropy and
//! the time-reversal relation between the two partners.

use crate::band_solver::KramersPair;
use crate::crystal_model::C64;
use crate::error::{Error, Result};
use crate::magnetic_response::gtensor::Svd3;
use crate::magnetic_response::rotation::v_aligned_pair;
use crate::symmetry::PointGroup;
use nalgebra::{DVector, Matrix2};

/// Pair spin densities (ρ_S of ξ, ρ̄_S of ξ̄).
#[derive(Clone, Copy, Debug)]
pub struct SpinDensity {
    pub rho: Matrix2<C64>,
    pub rho_bar: Matrix2<C64>,
}

/// ρ_{ss'} = Σ_o ψ_{s,o} ψ*_{s',o} for a spin-slowest state vector.
pub fn reduce_spin(state: &DVector<C64>) -> Matrix2<C64> {
    let h = state.len() / 2;
    let up = state.rows(0, h);
    let dn = state.rows(h, h);
    let uu = up.dotc(&up);
    let dd = dn.dotc(&dn);
    let ud = dn.dotc(&up);
    Matrix2::new(uu, ud, ud.conj(), dd)
}

pub fn spin_density(pair: &KramersPair) -> SpinDensity {
    SpinDensity {
        rho: reduce_spin(&pair.xi),
        rho_bar: reduce_spin(&pair.xi_bar),
    }
}

/// −Tr ρ log₂ ρ.
pub fn entropy(rho: &Matrix2<C64>) -> f64 {
    let a = rho[(0, 0)].re;
    let d = rho[(1, 1)].re;
    let b = rho[(0, 1)].norm();
    let tr = a + d;
    let disc = ((a - d) * (a - d) + 4.0 * b * b).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// σ_y ρᵀ σ_y.
pub fn time_reversed(rho: &Matrix2<C64>) -> Matrix2<C64> {
    let sy = Matrix2::new(C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0));
    sy * rho.transpose() * sy
}

/// ‖ρ̄_S − σ_y ρ_Sᵀ σ_y‖_F without the applicability check.
pub fn lemma_residual(pair: &KramersPair) -> f64 {
    let sd = spin_density(pair);
    (sd.rho_bar - time_reversed(&sd.rho)).norm()
}

fn applicable(pair: &KramersPair, group: PointGroup) -> Result<()> {
    if group.lemma_applies(&pair.k) {
        Ok(())
    } else {
        let n = pair.k.norm();
        Err(Error::DirectionNotApplicable {
            group: group.to_string(),
            direction: [pair.k.x / n, pair.k.y / n, pair.k.z / n],
        })
    }
}

pub fn check_lemma(pair: &KramersPair, group: PointGroup) -> Result<f64> {
    applicable(pair, group)?;
    Ok(lemma_residual(pair))
}

/// Entropies of ξ and ξ̄ in the frame where g_S = ±U·Σ.
pub fn verify_theorem2(pair: &KramersPair, svd_s: &Svd3, group: PointGroup) -> Result<(f64, f64)> {
    applicable(pair, group)?;
    let aligned = v_aligned_pair(pair, svd_s);
    let sd = spin_density(&aligned);
    Ok((entropy(&sd.rho), entropy(&sd.rho_bar)))
}

/// Entropies of |±⟩ = (ξ' ± ξ̄')/√2 and |±i⟩ = (ξ' ± iξ̄')/√2 in the V-aligned frame,
/// ordered [+, −, +i, −i].
pub fn cardinal_entropies(pair: &KramersPair, svd_s: &Svd3) -> [f64; 4] {
    let a = v_aligned_pair(pair, svd_s);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let i = C64::new(0.0, 1.0);
    let states = [
        (&a.xi + &a.xi_bar) * C64::new(r, 0.0),
        (&a.xi - &a.xi_bar) * C64::new(r, 0.0),
        (&a.xi + &a.xi_bar * i) * C64::new(r, 0.0),
        (&a.xi - &a.xi_bar * i) * C64::new(r, 0.0),
    ];
    states.map(|s| entropy(&reduce_spin(&s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pure_and_mixed_limits() {
        let up = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(entropy(&up), 0.0);
        let mixed = Matrix2::identity() * c(0.5, 0.0);
        assert!((entropy(&mixed) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_harmonic_half_half() {
        // (|Z↑⟩ + |X↓⟩ + i|Y↓⟩)/√3 in a 3-orbital, spin-slowest layout.
        let s = 1.0 / 3.0_f64.sqrt();
        let v = DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, 0.0)]);
        let rho = reduce_spin(&v);
        assert!((rho[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn product_state_is_pure() {
        let v = DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)]);
        let rho = reduce_spin(&v);
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(entropy(&rho) < 1e-12);
    }

    use crate::band_solver::{select_pair, solve};
    use crate::magnetic_response::gtensor::spin_g;
    use crate::test_support::{gaas, si};
    use nalgebra::Vector3;
    use proptest::prelude::*;

    #[test]
    fn zincblende_generic_direction_is_refused() {
        let sol = solve(gaas(), &Vector3::new(0.03, 0.05, 0.08)).unwrap();
        let pair = select_pair(gaas(), &sol, "split-off").unwrap();
        let err = check_lemma(&pair, gaas().point_group).unwrap_err();
        assert!(matches!(err, Error::DirectionNotApplicable { .. }));
        // The residual itself is still available.
        assert!(lemma_residual(&pair) > 1e-6);
    }

    #[test]
    fn zincblende_lemma_holds_on_delta_and_lambda() {
        for d in [Vector3::new(0.07, 0.0, 0.0), Vector3::new(0.0, -0.05, 0.0), Vector3::new(0.04, 0.04, 0.04), Vector3::new(-0.03, 0.03, 0.03)] {
            let sol = solve(gaas(), &d).unwrap();
            let pair = select_pair(gaas(), &sol, "split-off").unwrap();
            assert!(check_lemma(&pair, gaas().point_group).unwrap() < 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn diamond_lemma_holds_everywhere(k in prop::array::uniform3(-0.8f64..0.8)) {
            let sol = solve(si(), &Vector3::from(k)).unwrap();
            let pair = select_pair(si(), &sol, "split-off").unwrap();
            prop_assert!(check_lemma(&pair, si().point_group).unwrap() < 1e-8);
            let svd = Svd3::new(&spin_g(&pair));
            let (a, b) = verify_theorem2(&pair, &svd, si().point_group).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn time_reversal_is_an_involution(re in prop::array::uniform4(-1.0f64..1.0)) {
            let c = |x, y| C64::new(x, y);
            let rho = Matrix2::new(c(re[0], 0.0), c(re[1], re[2]), c(re[1], -re[2]), c(re[3], 0.0));
            prop_assert!((time_reversed(&time_reversed(&rho)) - rho).norm() < 1e-14);
            prop_assert!((time_reversed(&rho).trace() - rho.trace()).norm() < 1e-14);
        }
    }
}
