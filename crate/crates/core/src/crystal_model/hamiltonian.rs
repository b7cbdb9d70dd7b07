//! Spin-resolved Bloch Hamiltonian, its analytic k-gradient and the on-site
//! dipole operator.

use super::material::MaterialModel;
use super::orbital::Orbital;
use nalgebra::{Complex, DMatrix, Vector3};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Levi-Civita symbol.
pub(crate) fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Pauli matrix element (σ_a)_{s s'}.
pub(crate) fn pauli(a: usize, s: usize, t: usize) -> C64 {
    match (a, s, t) {
        (0, 0, 1) | (0, 1, 0) => C64::new(1.0, 0.0),
        (1, 0, 1) => C64::new(0.0, -1.0),
        (1, 1, 0) => C64::new(0.0, 1.0),
        (2, 0, 0) => C64::new(1.0, 0.0),
        (2, 1, 1) => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    }
}

/// ⟨p_j s| λ L·S |p_k s'⟩ with (L_i)_{jk} = −i ε_ijk and S = σ/2.
pub fn soc_element(lambda: f64, j: usize, s: usize, k: usize, t: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..3 {
        let eps = levi_civita(i, j, k);
        if eps != 0.0 {
            acc += -I * eps * pauli(i, s, t);
        }
    }
    acc * (0.5 * lambda)
}

/// Orbital-block hopping between site 0 and site 1 at k, and optionally
/// its derivative along `axis`.
fn hopping_block(m: &MaterialModel, k: &Vector3<f64>, axis: Option<usize>) -> DMatrix<C64> {
    let n = m.orbitals_per_atom();
    let mut h = DMatrix::<C64>::zeros(n, n);
    for b in &m.bonds {
        let phase = C64::from_polar(1.0, k.dot(&b.vector));
        let f = match axis {
            None => phase,
            Some(a) => I * b.vector[a] * phase,
        };
        for j in 0..n {
            for i in 0..n {
                let v = b.block[(i, j)];
                if v != 0.0 {
                    h[(i, j)] += f * v;
                }
            }
        }
    }
    h
}

/// Writes a site-0 → site-1 orbital block (and its adjoint) into both spin sectors.
fn place_hopping(m: &MaterialModel, h: &mut CMatrix, block: &DMatrix<C64>) {
    let n = m.orbitals_per_atom();
    for spin in 0..2 {
        let r0 = m.index(spin, 0, 0);
        let r1 = m.index(spin, 1, 0);
        for i in 0..n {
            for j in 0..n {
                let v = block[(i, j)];
                h[(r0 + i, r1 + j)] += v;
                h[(r1 + j, r0 + i)] += v.conj();
            }
        }
    }
}

/// k-independent on-site part: orbital energies and the p-shell λ_p L·S blocks.
pub fn onsite_hamiltonian(m: &MaterialModel) -> CMatrix {
    let dim = m.dim();
    let orbs = m.basis.orbitals();
    let mut h = CMatrix::zeros(dim, dim);
    for (site_idx, site) in m.sites.iter().enumerate() {
        for (o, orb) in orbs.iter().enumerate() {
            let e = site.onsite[Orbital::ALL.iter().position(|x| x == orb).unwrap()];
            for spin in 0..2 {
                let r = m.index(spin, site_idx, o);
                h[(r, r)] += C64::new(e, 0.0);
            }
        }
        if site.lambda_p == 0.0 {
            continue;
        }
        for s in 0..2 {
            for t in 0..2 {
                for j in 0..3 {
                    for k in 0..3 {
                        let v = soc_element(site.lambda_p, j, s, k, t);
                        let r = m.index(s, site_idx, 1 + j);
                        let c = m.index(t, site_idx, 1 + k);
                        h[(r, c)] += v;
                    }
                }
            }
        }
    }
    h
}

/// H(k) with Bloch phases attached to atomic positions.
pub fn bloch_hamiltonian(m: &MaterialModel, k: &Vector3<f64>) -> CMatrix {
    let mut h = onsite_hamiltonian(m);
    if !m.bonds.is_empty() {
        let block = hopping_block(m, k, None);
        place_hopping(m, &mut h, &block);
    }
    h
}

/// Analytic [∂H/∂k_x, ∂H/∂k_y, ∂H/∂k_z].
pub fn hamiltonian_gradient(m: &MaterialModel, k: &Vector3<f64>) -> [CMatrix; 3] {
    let dim = m.dim();
    std::array::from_fn(|axis| {
        let mut g = CMatrix::zeros(dim, dim);
        if !m.bonds.is_empty() {
            let block = hopping_block(m, k, Some(axis));
            place_hopping(m, &mut g, &block);
        }
        g
    })
}

/// Intra-atomic position operator: ⟨s|x_j|p_j⟩ = d on each atom, spin-diagonal.
pub fn dipole_operator(m: &MaterialModel) -> [CMatrix; 3] {
    let dim = m.dim();
    std::array::from_fn(|axis| {
        let mut d = CMatrix::zeros(dim, dim);
        for (site_idx, site) in m.sites.iter().enumerate() {
            for spin in 0..2 {
                let s = m.index(spin, site_idx, 0);
                let p = m.index(spin, site_idx, 1 + axis);
                d[(s, p)] = C64::new(site.dipole, 0.0);
                d[(p, s)] = C64::new(site.dipole, 0.0);
            }
        }
        d
    })
}

/// ‖A − A†‖∞ (max elementwise).
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band_solver::solve;
    use crate::crystal_model::lattice::reciprocal_vectors;
    use crate::symmetry::signed_permutations;
    use crate::test_support::{gaas, ge, si};
    use nalgebra::Matrix3;
    use proptest::prelude::*;

    fn kvec(k: [f64; 3]) -> Vector3<f64> {
        Vector3::from(k)
    }

    fn spectrum(m: &MaterialModel, k: &Vector3<f64>) -> Vec<f64> {
        solve(m, k).unwrap().energies
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn dimensions() {
        assert_eq!(si().dim(), 40);
        assert_eq!(ge().dim(), 40);
        assert_eq!(gaas().dim(), 16);
    }

    #[test]
    fn atomic_p_shell_splits_by_three_halves_lambda() {
        for m in [si(), ge()] {
            let atom = m.isolated_atom(&m.sites[0].species).unwrap();
            let sol = solve(&atom, &Vector3::zeros()).unwrap();
            let lambda = m.sites[0].lambda_p;
            let ep = m.sites[0].onsite[1];
            let p: Vec<f64> = sol.energies.iter().copied().filter(|e| (e - ep).abs() < 2.0 * lambda).collect();
            assert_eq!(p.len(), 6);
            for e in &p[..2] {
                assert!((e - (ep - lambda)).abs() < 1e-12);
            }
            for e in &p[2..] {
                assert!((e - (ep + 0.5 * lambda)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_soc_decouples_spins() {
        let m = si().with_soc_scale(0.0);
        let h = bloch_hamiltonian(&m, &kvec([0.1, -0.2, 0.3]));
        let half = m.dim() / 2;
        for i in 0..half {
            for j in 0..half {
                assert_eq!(h[(i, j + half)], C64::new(0.0, 0.0));
                assert!((h[(i, j)] - h[(i + half, j + half)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gamma_ordering_of_si_valence() {
        // Heavy/light holes (4-fold) sit above the split-off doublet.
        let e = spectrum(si(), &Vector3::zeros());
        assert!((e[2] - e[3]).abs() < 1e-12);
        assert!((e[4] - e[7]).abs() < 1e-12);
        let so = (e[4] - e[2]) * crate::units::HARTREE_EV;
        assert!((so - 0.044).abs() < 2e-3, "split-off gap {so}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn hamiltonian_is_hermitian(k in prop::array::uniform3(-1.5f64..1.5)) {
            for m in [si(), gaas()] {
                prop_assert!(hermiticity_defect(&bloch_hamiltonian(m, &kvec(k))) < 1e-14);
            }
        }

        #[test]
        fn gradient_matches_finite_difference(k in prop::array::uniform3(-1.5f64..1.5)) {
            let h = 1e-5;
            for m in [si(), gaas()] {
                let k = kvec(k);
                let g = hamiltonian_gradient(m, &k);
                for a in 0..3 {
                    let mut dk = Vector3::zeros();
                    dk[a] = h;
                    let fd = (bloch_hamiltonian(m, &(k + dk)) - bloch_hamiltonian(m, &(k - dk))) / C64::new(2.0 * h, 0.0);
                    let err = (&g[a] - fd).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    prop_assert!(err < 1e-8, "axis {} err {}", a, err);
                }
            }
        }

        #[test]
        fn spectrum_is_reciprocal_lattice_periodic(k in prop::array::uniform3(-1.0f64..1.0), n in prop::array::uniform3(-2i32..=2)) {
            for m in [si(), gaas()] {
                let b = reciprocal_vectors(m.lattice_constant);
                let g = b[0] * n[0] as f64 + b[1] * n[1] as f64 + b[2] * n[2] as f64;
                let k = kvec(k);
                prop_assert!(max_diff(&spectrum(m, &k), &spectrum(m, &(k + g))) < 1e-10);
            }
        }

        #[test]
        fn spectrum_has_cubic_symmetry(k in prop::array::uniform3(-1.0f64..1.0), op in 0usize..48) {
            let k = kvec(k);
            let r: Matrix3<f64> = signed_permutations()[op];
            for m in [si(), gaas()] {
                // Time reversal adds −k, so the zincblende spectrum also has all 48 images.
                prop_assert!(max_diff(&spectrum(m, &k), &spectrum(m, &(r * k))) < 1e-10);
            }
        }

        #[test]
        fn diamond_levels_are_doubly_degenerate(k in prop::array::uniform3(-1.0f64..1.0)) {
            let e = spectrum(si(), &kvec(k));
            for p in e.chunks(2) {
                prop_assert!((p[1] - p[0]).abs() < 1e-10);
            }
        }
    }
}
