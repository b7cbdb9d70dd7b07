//! Diagonalisation of H(k), Kramers-pair selection and gauge-continuous rays.

use crate::crystal_model::{bloch_hamiltonian, CMatrix, MaterialModel, Wavevector, C64};
use crate::error::{Error, Result};
use nalgebra::{DVector, Matrix2};

/// Maximum |E_n − E_m| for pairs of inversion-symmetric crystals (Hartree).
pub const PAIR_SPLIT_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct BlochSolution {
    pub k: Wavevector,
    /// Ascending eigenvalues (Hartree).
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub states: CMatrix,
}

/// The two states |ξ⟩, |ξ̄⟩ of a band pair at one k.
#[derive(Clone, Debug)]
pub struct KramersPair {
    pub band_indices: (usize, usize),
    pub k: Wavevector,
    pub xi: DVector<C64>,
    pub xi_bar: DVector<C64>,
    /// (E_n, E_m).
    pub energies: (f64, f64),
    pub pair_energy: f64,
    pub gap_to_rest: f64,
    /// Columns of (ξ, ξ̄) expressed in the eigenvector columns (n, m): [ξ ξ̄] = [u_n u_m]·basis.
    pub basis: Matrix2<C64>,
}

/// How strictly the two bands must coincide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairPolicy {
    /// Exact Kramers degeneracy within the given tolerance.
    Degenerate(f64),
    /// Adjacent bands; splitting allowed as long as it is smaller than the gap to the rest.
    Adjacent,
}

impl PairPolicy {
    pub fn for_model(m: &MaterialModel) -> Self {
        if m.is_inversion_symmetric() {
            PairPolicy::Degenerate(PAIR_SPLIT_TOL)
        } else {
            PairPolicy::Adjacent
        }
    }
}

pub fn solve(m: &MaterialModel, k: &Wavevector) -> Result<BlochSolution> {
    solve_hamiltonian(bloch_hamiltonian(m, k), *k)
}

/// Diagonalises a Hermitian matrix and sorts the spectrum ascending.
pub fn solve_hamiltonian(h: CMatrix, k: Wavevector) -> Result<BlochSolution> {
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    if eig.eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::Internal(format!("non-finite eigenvalue at k = {:?}", k.as_slice())));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let states = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(BlochSolution { k, energies, states })
}

impl BlochSolution {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn state(&self, n: usize) -> DVector<C64> {
        self.states.column(n).into_owned()
    }

    /// Smallest distance from bands n, m to any other band.
    pub fn gap_to_rest(&self, n: usize, m: usize) -> f64 {
        let (en, em) = (self.energies[n], self.energies[m]);
        self.energies
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != n && *l != m)
            .map(|(_, &e)| (e - en).abs().min((e - em).abs()))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn select_pair(m: &MaterialModel, sol: &BlochSolution, band_id: &str) -> Result<KramersPair> {
    let idx = m.band_pair(band_id)?;
    select_pair_indices(sol, idx, PairPolicy::for_model(m))
}

pub fn select_pair_indices(sol: &BlochSolution, (n, m): (usize, usize), policy: PairPolicy) -> Result<KramersPair> {
    if n >= sol.dim() || m >= sol.dim() || n == m {
        return Err(Error::Usage(format!("band indices ({n}, {m}) out of range")));
    }
    let (en, em) = (sol.energies[n], sol.energies[m]);
    let split = (en - em).abs();
    let gap = sol.gap_to_rest(n, m);
    let ok = match policy {
        PairPolicy::Degenerate(tol) => split <= tol && gap > tol,
        PairPolicy::Adjacent => gap > split,
    };
    if !ok {
        return Err(Error::PairingAmbiguity {
            k: [sol.k.x, sol.k.y, sol.k.z],
            indices: (n, m),
            split,
            gap,
        });
    }
    Ok(KramersPair {
        band_indices: (n, m),
        k: sol.k,
        xi: sol.state(n),
        xi_bar: sol.state(m),
        energies: (en, em),
        pair_energy: 0.5 * (en + em),
        gap_to_rest: gap,
        basis: Matrix2::identity(),
    })
}

impl KramersPair {
    /// Re-mixes the pair with a 2×2 unitary: [ξ' ξ̄'] = [ξ ξ̄]·w.
    pub fn remixed(&self, w: &Matrix2<C64>) -> KramersPair {
        let xi = &self.xi * w[(0, 0)] + &self.xi_bar * w[(1, 0)];
        let xi_bar = &self.xi * w[(0, 1)] + &self.xi_bar * w[(1, 1)];
        KramersPair {
            xi,
            xi_bar,
            basis: self.basis * w,
            ..self.clone()
        }
    }

    /// 2×2 overlap ⟨a|b⟩ with a from `self`, b from `other`.
    pub fn overlap(&self, other: &KramersPair) -> Matrix2<C64> {
        Matrix2::new(
            self.xi.dotc(&other.xi),
            self.xi.dotc(&other.xi_bar),
            self.xi_bar.dotc(&other.xi),
            self.xi_bar.dotc(&other.xi_bar),
        )
    }

    pub fn states(&self) -> [&DVector<C64>; 2] {
        [&self.xi, &self.xi_bar]
    }
}

/// Unitary factor W of the polar decomposition O = W·P.
pub fn polar_unitary(o: &Matrix2<C64>) -> Matrix2<C64> {
    let svd = o.svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Solves along `direction` at the given radii, rotating each pair so that its
/// overlap with the previous one is Hermitian positive (maximal overlap).
pub fn follow_ray_solutions(
    m: &MaterialModel,
    direction: &Wavevector,
    radii: &[f64],
    band_id: &str,
) -> Result<Vec<(BlochSolution, KramersPair)>> {
    let idx = m.band_pair(band_id)?;
    let policy = PairPolicy::for_model(m);
    let u = direction.normalize();
    let mut out: Vec<(BlochSolution, KramersPair)> = Vec::with_capacity(radii.len());
    for &r in radii {
        let sol = solve(m, &(u * r))?;
        let mut pair = select_pair_indices(&sol, idx, policy)?;
        if let Some((_, prev)) = out.last() {
            let w = polar_unitary(&prev.overlap(&pair));
            pair = pair.remixed(&w.adjoint());
        }
        out.push((sol, pair));
    }
    Ok(out)
}

pub fn follow_ray(m: &MaterialModel, direction: &Wavevector, radii: &[f64], band_id: &str) -> Result<Vec<KramersPair>> {
    Ok(follow_ray_solutions(m, direction, radii, band_id)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal_model::lattice::symmetry_point;
    use crate::test_support::{gaas, si};
    use nalgebra::Vector3;

    #[test]
    fn eigenpairs_solve_h() {
        let k = Vector3::new(0.13, -0.4, 0.27);
        let h = bloch_hamiltonian(si(), &k);
        let sol = solve(si(), &k).unwrap();
        assert!(sol.energies.windows(2).all(|w| w[0] <= w[1]));
        for n in [0, 2, 8, 39] {
            let v = sol.state(n);
            let r = &h * &v - &v * C64::new(sol.energies[n], 0.0);
            assert!(r.norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_fold_level_is_ambiguous() {
        let x = Vector3::from(symmetry_point("X").unwrap()) * (2.0 * std::f64::consts::PI / si().lattice_constant);
        let sol = solve(si(), &x).unwrap();
        let err = select_pair(si(), &sol, "first-conduction").unwrap_err();
        assert!(matches!(err, Error::PairingAmbiguity { .. }));
        assert!(err.is_physics());
    }

    #[test]
    fn zincblende_pair_is_split_off_gamma() {
        let sol = solve(gaas(), &Vector3::new(0.05, 0.02, 0.01)).unwrap();
        let pair = select_pair(gaas(), &sol, "split-off").unwrap();
        let split = (pair.energies.1 - pair.energies.0).abs();
        assert!(split > 0.0 && split < pair.gap_to_rest);
        assert!(matches!(
            select_pair_indices(&sol, (2, 3), PairPolicy::Degenerate(1e-12)),
            Err(Error::PairingAmbiguity { .. })
        ));
    }

    #[test]
    fn remixing_tracks_basis() {
        let sol = solve(si(), &Vector3::new(0.1, 0.0, 0.05)).unwrap();
        let pair = select_pair(si(), &sol, "split-off").unwrap();
        let c = C64::new;
        let w = Matrix2::new(c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.8), c(0.6, 0.0));
        let p = pair.remixed(&w);
        assert!((p.basis - w).norm() < 1e-15);
        assert!((p.overlap(&p) - Matrix2::identity()).norm() < 1e-12);
        let xi = sol.state(2) * p.basis[(0, 0)] + sol.state(3) * p.basis[(1, 0)];
        assert!((xi - &p.xi).norm() < 1e-12);
    }

    #[test]
    fn followed_ray_has_positive_overlaps() {
        let radii: Vec<f64> = (0..40).map(|i| 0.005 * i as f64).collect();
        let pairs = follow_ray(si(), &Vector3::new(0.3, 0.5, 0.8), &radii, "split-off").unwrap();
        for w in pairs.windows(2) {
            let o = w[0].overlap(&w[1]);
            assert!((o - o.adjoint()).norm() < 1e-10);
            let eig = o.symmetric_eigen();
            assert!(eig.eigenvalues.iter().all(|&e| e > 0.9));
        }
    }
}
