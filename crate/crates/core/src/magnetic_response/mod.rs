//! Momentum matrix elements, g-tensors, Zeeman response and the atomic dipole fit.

pub mod atomfit;
pub mod gtensor;
pub mod momentum;
pub mod rotation;
pub mod zeeman;

pub use atomfit::{atomfit, atomfit_all, AtomFit};
pub use gtensor::{g_total, orbital_g, spin_g, GTensorSet, PairOperators, Svd3, ENERGY_FLOOR};
pub use momentum::{momentum_elements, pair_momentum, MomentumTable, PairMomentum};
pub use zeeman::{zeeman, FieldResponse};
