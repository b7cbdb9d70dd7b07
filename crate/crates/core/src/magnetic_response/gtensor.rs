//! Spin, orbital and total g-tensors of a band pair.

use super::momentum::PairMomentum;
use crate::band_solver::{BlochSolution, KramersPair};
use crate::crystal_model::hamiltonian::levi_civita;
use crate::crystal_model::{bloch_hamiltonian, dipole_operator, hamiltonian_gradient, MaterialModel, C64};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector3};

/// Default lower bound on |Ē − E_l| for intermediate bands (Hartree).
pub const ENERGY_FLOOR: f64 = 1e-5;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Spin and orbital 2×2 matrices of a pair.
#[derive(Clone, Debug)]
pub struct PairOperators {
    pub s: [Matrix2<C64>; 3],
    pub l: [Matrix2<C64>; 3],
}

/// g = U · diag(Σ) · V with Σ descending and U, V real orthogonal.
#[derive(Clone, Copy, Debug)]
pub struct Svd3 {
    pub u: Matrix3<f64>,
    pub sigma: Vector3<f64>,
    pub v: Matrix3<f64>,
}

impl Svd3 {
    pub fn new(g: &Matrix3<f64>) -> Self {
        let svd = g.svd(true, true);
        let (u, vt, s) = (svd.u.unwrap(), svd.v_t.unwrap(), svd.singular_values);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
        Svd3 {
            u: Matrix3::from_columns(&order.map(|i| u.column(i).into_owned())),
            sigma: Vector3::from(order.map(|i| s[i])),
            v: Matrix3::from_rows(&order.map(|i| vt.row(i).into_owned())),
        }
    }

    /// sgn det(g) = det(U)·det(V), meaningful even when Σ_zz underflows.
    pub fn det_sign(&self) -> f64 {
        (self.u.determinant() * self.v.determinant()).signum()
    }

    pub fn det(&self) -> f64 {
        self.det_sign() * self.sigma.iter().product::<f64>()
    }

    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.u * Matrix3::from_diagonal(&self.sigma) * self.v
    }
}

#[derive(Clone, Debug)]
pub struct GTensorSet {
    pub g_s: Matrix3<f64>,
    pub g_l: Matrix3<f64>,
    pub g_tot: Matrix3<f64>,
    /// G = g_tot · g_totᵀ.
    pub big_g: Matrix3<f64>,
    pub svd_s: Svd3,
    pub svd_l: Svd3,
    pub svd_tot: Svd3,
    pub det_gs: f64,
    pub det_gtot: f64,
}

impl GTensorSet {
    pub fn from_parts(g_s: Matrix3<f64>, g_l: Matrix3<f64>) -> Self {
        let g_tot = g_s + g_l;
        let (svd_s, svd_l, svd_tot) = (Svd3::new(&g_s), Svd3::new(&g_l), Svd3::new(&g_tot));
        GTensorSet {
            g_s,
            g_l,
            g_tot,
            big_g: g_tot * g_tot.transpose(),
            det_gs: svd_s.det(),
            det_gtot: svd_tot.det(),
            svd_s,
            svd_l,
            svd_tot,
        }
    }
}

/// σ_i applied to a spin-slowest state vector.
pub fn apply_pauli(axis: usize, v: &DVector<C64>) -> DVector<C64> {
    let h = v.len() / 2;
    let (up, dn) = (v.rows(0, h), v.rows(h, h));
    let mut out = DVector::<C64>::zeros(v.len());
    match axis {
        0 => {
            out.rows_mut(0, h).copy_from(&dn);
            out.rows_mut(h, h).copy_from(&up);
        }
        1 => {
            out.rows_mut(0, h).copy_from(&(dn * -I));
            out.rows_mut(h, h).copy_from(&(up * I));
        }
        _ => {
            out.rows_mut(0, h).copy_from(&up);
            out.rows_mut(h, h).copy_from(&(-dn));
        }
    }
    out
}

/// S_i = ½ ⟨a|σ_i|b⟩ over (ξ, ξ̄).
pub fn spin_matrices(pair: &KramersPair) -> [Matrix2<C64>; 3] {
    let st = pair.states();
    std::array::from_fn(|i| {
        let s0 = apply_pauli(i, st[0]);
        let s1 = apply_pauli(i, st[1]);
        Matrix2::new(st[0].dotc(&s0), st[0].dotc(&s1), st[1].dotc(&s0), st[1].dotc(&s1)) * C64::new(0.5, 0.0)
    })
}

/// Real coefficients of a 2×2 Hermitian matrix along σ̃_j: Tr(M σ̃_j).
pub fn pauli_components(m: &Matrix2<C64>) -> Vector3<f64> {
    Vector3::new(
        (m[(0, 1)] + m[(1, 0)]).re,
        (I * (m[(0, 1)] - m[(1, 0)])).re,
        (m[(0, 0)] - m[(1, 1)]).re,
    )
}

/// g_ij = Tr(M_i σ̃_j).
pub fn tensor_from(ms: &[Matrix2<C64>; 3], scale: f64) -> Matrix3<f64> {
    let mut g = Matrix3::zeros();
    for i in 0..3 {
        g.set_row(i, &(pauli_components(&ms[i]) * scale).transpose());
    }
    g
}

/// g_Sij = Tr(2 S_i σ̃_j).
pub fn spin_g(pair: &KramersPair) -> Matrix3<f64> {
    tensor_from(&spin_matrices(pair), 2.0)
}

fn check_denominators(pair: &KramersPair, sol: &BlochSolution, floor: f64) -> Result<Vec<(usize, f64)>> {
    let (n, m) = pair.band_indices;
    let mut out = Vec::with_capacity(sol.dim());
    for (l, &e) in sol.energies.iter().enumerate() {
        if l == n || l == m {
            continue;
        }
        let gap = pair.pair_energy - e;
        if gap.abs() < floor {
            return Err(Error::NearDegenerateIntermediate {
                band: l,
                gap: gap.abs(),
                k: [sol.k.x, sol.k.y, sol.k.z],
            });
        }
        out.push((l, 1.0 / gap));
    }
    Ok(out)
}

/// Σ_l π_j,al π_k,lb / (Ē − E_l) for all j, k.
fn second_order_sums(pm: &PairMomentum, weights: &[(usize, f64)]) -> [[Matrix2<C64>; 3]; 3] {
    let r = &pm.rows;
    std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            let mut acc = Matrix2::zeros();
            for &(l, w) in weights {
                for a in 0..2 {
                    for b in 0..2 {
                        // π_k,lb = conj(π_k,bl)
                        acc[(a, b)] += r[j][(a, l)] * r[k][(b, l)].conj() * w;
                    }
                }
            }
            acc
        })
    })
}

/// Orbital matrices L_i = −(i/2) ε_ijk Σ_l π_j,al π_k,lb / (Ē − E_l).
pub fn orbital_matrices(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<[Matrix2<C64>; 3]> {
    let w = check_denominators(pair, sol, floor)?;
    let t = second_order_sums(pm, &w);
    Ok(std::array::from_fn(|i| {
        let mut acc = Matrix2::zeros();
        for j in 0..3 {
            for k in 0..3 {
                let eps = levi_civita(i, j, k);
                if eps != 0.0 {
                    acc += t[j][k] * C64::new(eps, 0.0);
                }
            }
        }
        acc * (-0.5 * I)
    }))
}

/// Antisymmetric inverse mass (1/m*)^AS_jk = Σ_l [π_j π_k − π_k π_j]_{ab} / (Ē − E_l).
pub fn antisymmetric_inverse_mass(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<[[Matrix2<C64>; 3]; 3]> {
    let w = check_denominators(pair, sol, floor)?;
    let t = second_order_sums(pm, &w);
    Ok(std::array::from_fn(|j| std::array::from_fn(|k| t[j][k] - t[k][j])))
}

/// L_i = −(i/4) ε_ijk (1/m*)^AS_jk.
pub fn orbital_matrices_luttinger(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<[Matrix2<C64>; 3]> {
    let mass = antisymmetric_inverse_mass(pair, sol, pm, floor)?;
    Ok(std::array::from_fn(|i| {
        let mut acc = Matrix2::zeros();
        for j in 0..3 {
            for k in 0..3 {
                let eps = levi_civita(i, j, k);
                if eps != 0.0 {
                    acc += mass[j][k] * C64::new(eps, 0.0);
                }
            }
        }
        acc * (-0.25 * I)
    }))
}

/// Commutator form built directly from the orbital-basis operator
/// [x_j, H] = i ∂H/∂k_j + [d_j, H], without going through π:
/// L_i = (i/2) ε_ijk Σ_l [x_j,H]_al [x_k,H]_lb / (Ē − E_l).
pub fn orbital_matrices_commutator(m: &MaterialModel, pair: &KramersPair, sol: &BlochSolution, floor: f64) -> Result<[Matrix2<C64>; 3]> {
    let w = check_denominators(pair, sol, floor)?;
    let h = bloch_hamiltonian(m, &sol.k);
    let grad = hamiltonian_gradient(m, &sol.k);
    let dip = dipole_operator(m);
    let v = &sol.states;
    let st = pair.states();
    // left[j] = ⟨a|C_j|u_l⟩ (2 × N), right[j] = ⟨u_l|C_j|b⟩ (N × 2)
    let mut left = Vec::with_capacity(3);
    let mut right = Vec::with_capacity(3);
    for j in 0..3 {
        let c = &grad[j] * I + (&dip[j] * &h - &h * &dip[j]);
        let cv = &c * v;
        left.push(DMatrix::from_fn(2, v.ncols(), |a, l| st[a].dotc(&cv.column(l))));
        let cb = [&c * st[0], &c * st[1]];
        right.push(DMatrix::from_fn(v.ncols(), 2, |l, b| v.column(l).dotc(&cb[b])));
    }
    Ok(std::array::from_fn(|i| {
        let mut acc = Matrix2::zeros();
        for j in 0..3 {
            for k in 0..3 {
                let eps = levi_civita(i, j, k);
                if eps == 0.0 {
                    continue;
                }
                for &(l, wl) in &w {
                    for a in 0..2 {
                        for b in 0..2 {
                            acc[(a, b)] += left[j][(a, l)] * right[k][(l, b)] * (eps * wl);
                        }
                    }
                }
            }
        }
        acc * (0.5 * I)
    }))
}

/// g_Lij = Tr(L_i σ̃_j).
pub fn orbital_g(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<Matrix3<f64>> {
    Ok(tensor_from(&orbital_matrices(pair, sol, pm, floor)?, 1.0))
}

pub fn pair_operators(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<PairOperators> {
    Ok(PairOperators {
        s: spin_matrices(pair),
        l: orbital_matrices(pair, sol, pm, floor)?,
    })
}

pub fn g_total(pair: &KramersPair, sol: &BlochSolution, pm: &PairMomentum, floor: f64) -> Result<GTensorSet> {
    Ok(GTensorSet::from_parts(spin_g(pair), orbital_g(pair, sol, pm, floor)?))
}

impl PairOperators {
    pub fn tensors(&self) -> GTensorSet {
        GTensorSet::from_parts(tensor_from(&self.s, 2.0), tensor_from(&self.l, 1.0))
    }
}
