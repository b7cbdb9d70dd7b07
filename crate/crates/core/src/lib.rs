//! Spin and orbital g-tensors of Kramers band pairs in diamond and zincblende
//! semiconductors from empirical tight binding, with the spin-orbital
//! entanglement of the pair states and the surfaces where det(g) vanishes.

pub mod band_solver;
pub mod crystal_model;
pub mod entanglement;
pub mod magnetic_response;
pub mod surface_scan;
pub mod error;
pub mod symmetry;
pub mod units;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::crystal_model::{load_material, MaterialModel};
    use std::sync::OnceLock;

    fn load(name: &str, cell: &'static OnceLock<MaterialModel>) -> &'static MaterialModel {
        cell.get_or_init(|| {
            let path = format!("{}/../../materials/{name}.toml", env!("CARGO_MANIFEST_DIR"));
            load_material(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
        })
    }

    pub fn si() -> &'static MaterialModel {
        static CELL: OnceLock<MaterialModel> = OnceLock::new();
        load("si", &CELL)
    }

    pub fn ge() -> &'static MaterialModel {
        static CELL: OnceLock<MaterialModel> = OnceLock::new();
        load("ge", &CELL)
    }

    pub fn gaas() -> &'static MaterialModel {
        static CELL: OnceLock<MaterialModel> = OnceLock::new();
        load("gaas", &CELL)
    }
}
