//! Fit of the intra-atomic ⟨s|x|p_x⟩ dipole to the Landé value of the atomic
//! j = 1/2 doublet.

use super::gtensor::{g_total, GTensorSet, ENERGY_FLOOR};
use super::momentum::pair_momentum;
use crate::band_solver::{solve, select_pair_indices, PairPolicy};
use crate::crystal_model::{MaterialModel, Wavevector};
use crate::error::{Error, Result};

/// Search interval for the dipole (Bohr).
pub const DIPOLE_BRACKET: (f64, f64) = (0.0, 10.0);

/// Landé g of the p_{1/2} doublet.
pub const LANDE_J_HALF: f64 = 2.0 / 3.0;

#[derive(Clone, Debug)]
pub struct AtomFit {
    pub species: String,
    /// Fitted ⟨s|x|p_x⟩ (Bohr).
    pub dipole: f64,
    pub tensors: GTensorSet,
}

/// Signed isotropic value cbrt(det g).
pub fn isotropic(g: &nalgebra::Matrix3<f64>) -> f64 {
    g.determinant().cbrt()
}

/// g-tensors of the j = 1/2 doublet of an isolated atom of `species` with the given dipole.
pub fn atomic_doublet(m: &MaterialModel, species: &str, dipole: f64) -> Result<GTensorSet> {
    let atom = m.isolated_atom(species)?.with_dipole(species, dipole);
    let sol = solve(&atom, &Wavevector::zeros())?;
    // p levels are the states with p weight above one half; j = 1/2 is the lower pair.
    let p_slots: Vec<usize> = (0..2)
        .flat_map(|spin| (1..4).map(move |o| (spin, o)))
        .map(|(spin, o)| atom.index(spin, 0, o))
        .collect();
    let mut p_states: Vec<usize> = (0..sol.dim())
        .filter(|&c| p_slots.iter().map(|&r| sol.states[(r, c)].norm_sqr()).sum::<f64>() > 0.5)
        .collect();
    p_states.sort_by(|&a, &b| sol.energies[a].total_cmp(&sol.energies[b]));
    let site = &atom.sites[0];
    if p_states.len() != 6 || site.lambda_p <= 0.0 {
        return Err(Error::validation(
            format!("soc.{species}.lambda_p_ev"),
            "atomic p shell must be split by a positive spin-orbit constant",
        ));
    }
    let (n, mm) = (p_states[0], p_states[1]);
    let pair = select_pair_indices(&sol, (n.min(mm), n.max(mm)), PairPolicy::Degenerate(1e-9))?;
    let pm = pair_momentum(&atom, &sol, &pair);
    g_total(&pair, &sol, &pm, ENERGY_FLOOR)
}

/// Bracketed root search for the dipole giving cbrt(det g_tot) = target.
pub fn atomfit(m: &MaterialModel, species: &str, target: f64) -> Result<AtomFit> {
    let f = |d: f64| -> Result<f64> { Ok(isotropic(&atomic_doublet(m, species, d)?.g_tot) - target) };
    let (mut lo, mut hi) = DIPOLE_BRACKET;
    let (mut flo, fhi) = (f(lo)?, f(hi)?);
    if flo == 0.0 {
        hi = lo;
    } else if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket {
            target,
            lo,
            hi,
            g_lo: flo + target,
            g_hi: fhi + target,
        });
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let dipole = 0.5 * (lo + hi);
    Ok(AtomFit {
        species: species.to_string(),
        dipole,
        tensors: atomic_doublet(m, species, dipole)?,
    })
}

/// One fit per distinct species of the model.
pub fn atomfit_all(m: &MaterialModel, target: f64) -> Result<Vec<AtomFit>> {
    m.species_names().iter().map(|s| atomfit(m, s, target)).collect()
}
