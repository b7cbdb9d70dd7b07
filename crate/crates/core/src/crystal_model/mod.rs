//! Crystal description: orbitals, Slater–Koster tables, material files and the
//! Bloch Hamiltonian.

pub mod hamiltonian;
pub mod lattice;
pub mod material;
pub mod orbital;
pub mod slater_koster;

pub use hamiltonian::{bloch_hamiltonian, dipole_operator, hamiltonian_gradient, CMatrix, C64};
pub use material::{load_material, parse_material, MaterialModel, Site};
pub use orbital::{Basis, Orbital};
pub use slater_koster::PairIntegrals;

/// Wavevector in inverse Bohr, measured from Γ.
pub type Wavevector = nalgebra::Vector3<f64>;
