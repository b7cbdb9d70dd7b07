//! Band-basis momentum matrix elements
//! π_nm = ⟨n|∇_k H|m⟩ + i (E_n − E_m) ⟨n|d|m⟩.

use crate::band_solver::{BlochSolution, KramersPair};
use crate::crystal_model::{dipole_operator, hamiltonian_gradient, CMatrix, MaterialModel, C64};
use nalgebra::DMatrix;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Full table ⟨u_a|π_j|u_b⟩ over all bands.
#[derive(Clone, Debug)]
pub struct MomentumTable {
    pub pi: [CMatrix; 3],
}

/// Rows ⟨ξ|π_j|u_l⟩ and ⟨ξ̄|π_j|u_l⟩ of the pair (2 × N per axis).
#[derive(Clone, Debug)]
pub struct PairMomentum {
    pub rows: [DMatrix<C64>; 3],
}

pub fn momentum_elements(m: &MaterialModel, sol: &BlochSolution) -> MomentumTable {
    let grad = hamiltonian_gradient(m, &sol.k);
    let dip = dipole_operator(m);
    let v = &sol.states;
    let vh = v.adjoint();
    let e = &sol.energies;
    let pi = std::array::from_fn(|j| {
        let mut p = &vh * &grad[j] * v;
        let d = &vh * &dip[j] * v;
        for a in 0..p.nrows() {
            for b in 0..p.ncols() {
                p[(a, b)] += I * (e[a] - e[b]) * d[(a, b)];
            }
        }
        p
    });
    MomentumTable { pi }
}

impl MomentumTable {
    /// Pair rows in the (possibly re-mixed) pair basis.
    pub fn pair_rows(&self, pair: &KramersPair) -> PairMomentum {
        let (n, m) = pair.band_indices;
        let xh = pair.basis.adjoint();
        let rows = std::array::from_fn(|j| {
            let p = &self.pi[j];
            DMatrix::from_fn(2, p.ncols(), |r, l| xh[(r, 0)] * p[(n, l)] + xh[(r, 1)] * p[(m, l)])
        });
        PairMomentum { rows }
    }
}

/// Pair rows only, without forming the full N × N table.
pub fn pair_momentum(m: &MaterialModel, sol: &BlochSolution, pair: &KramersPair) -> PairMomentum {
    let grad = hamiltonian_gradient(m, &sol.k);
    let dip = dipole_operator(m);
    let (n, mm) = pair.band_indices;
    let v = &sol.states;
    let e = &sol.energies;
    let un = v.column(n).adjoint();
    let um = v.column(mm).adjoint();
    let xh = pair.basis.adjoint();
    let rows = std::array::from_fn(|j| {
        let gn = &un * &grad[j] * v;
        let gm = &um * &grad[j] * v;
        let dn = &un * &dip[j] * v;
        let dm = &um * &dip[j] * v;
        let dim = v.ncols();
        let eig_rows = DMatrix::from_fn(2, dim, |r, l| {
            if r == 0 {
                gn[(0, l)] + I * (e[n] - e[l]) * dn[(0, l)]
            } else {
                gm[(0, l)] + I * (e[mm] - e[l]) * dm[(0, l)]
            }
        });
        DMatrix::from_fn(2, dim, |r, l| xh[(r, 0)] * eig_rows[(0, l)] + xh[(r, 1)] * eig_rows[(1, l)])
    });
    PairMomentum { rows }
}
