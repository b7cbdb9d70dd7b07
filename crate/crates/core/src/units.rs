//! Hartree atomic units and the conversions used at the file boundary.

/// Hartree energy in electron-volts.
pub const HARTREE_EV: f64 = 27.211_386_245_988;

/// Bohr radius in Ångström.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;

/// Bohr magneton (e ħ / 2m with e = ħ = m = 1).
pub const MU_B: f64 = 0.5;

/// One atomic unit of magnetic flux density expressed in Tesla.
pub const TESLA_PER_AU: f64 = 2.350_517_567_58e5;

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}

pub fn angstrom_to_bohr(x: f64) -> f64 {
    x / BOHR_ANGSTROM
}

pub fn tesla_to_au(b: f64) -> f64 {
    b / TESLA_PER_AU
}
