//! Material parameter files and the validated, immutable model built from them.

use super::orbital::{Basis, Orbital};
use super::slater_koster::{self, PairIntegrals};
use crate::error::{Error, Result};
use crate::symmetry::PointGroup;
use crate::units::{angstrom_to_bohr, ev_to_hartree};
use nalgebra::{DMatrix, Vector3};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

/// Fractional positions (cubic cell units) of the two sublattices.
pub const SITE_POSITIONS: [[f64; 3]; 2] = [[0.0, 0.0, 0.0], [0.25, 0.25, 0.25]];

/// Nearest-neighbour bonds from site 0 to site 1, in units of a/4.
pub const BOND_DIRECTIONS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Per-site physical data (energies in Hartree, lengths in Bohr).
#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub species: String,
    pub position: [f64; 3],
    /// On-site energy per orbital, indexed like `Orbital::ALL`.
    pub onsite: [f64; 10],
    pub lambda_p: f64,
    /// ⟨s|x|p_x⟩ on this atom.
    pub dipole: f64,
}

/// One nearest-neighbour bond with its precomputed real hopping block.
#[derive(Clone, Debug)]
pub(crate) struct Bond {
    /// Bond vector site 0 → site 1 (Bohr).
    pub vector: Vector3<f64>,
    pub block: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct MaterialModel {
    pub name: String,
    /// Cubic lattice constant (Bohr).
    pub lattice_constant: f64,
    pub basis: Basis,
    pub point_group: PointGroup,
    pub sites: Vec<Site>,
    /// Integrals for (species of site 0, species of site 1) and the reverse order.
    pub hopping: [PairIntegrals; 2],
    /// Band-pair labels → sorted band indices.
    pub bands: BTreeMap<String, (usize, usize)>,
    pub(crate) bonds: Vec<Bond>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    lattice_constant_angstrom: f64,
    basis: Basis,
    point_group: PointGroup,
    species: Vec<String>,
    onsite: BTreeMap<String, BTreeMap<String, f64>>,
    soc: BTreeMap<String, SocEntry>,
    #[serde(default)]
    dipole: BTreeMap<String, DipoleEntry>,
    sk: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    bands: BTreeMap<String, [usize; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SocEntry {
    lambda_p_ev: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DipoleEntry {
    s_p_bohr: f64,
}

const SP3_INTEGRALS: [&str; 4] = ["ss_sigma", "sp_sigma", "pp_sigma", "pp_pi"];

fn integral_required(basis: Basis, key: &str) -> bool {
    match basis {
        Basis::Sp3d5s => true,
        Basis::Sp3 => SP3_INTEGRALS.contains(&key),
    }
}

fn onsite_keys(basis: Basis) -> &'static [&'static str] {
    match basis {
        Basis::Sp3 => &["s", "p"],
        Basis::Sp3d5s => &["s", "p", "d", "s*"],
    }
}

pub fn load_material(path: impl AsRef<Path>) -> Result<MaterialModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_material(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

pub fn parse_material(text: &str) -> Result<MaterialModel> {
    let file: MaterialFile = toml::from_str(text).map_err(|e| Error::Parse {
        path: "<string>".into(),
        message: e.to_string(),
    })?;
    build(file)
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::validation(key, "not a finite number"))
    }
}

fn build(f: MaterialFile) -> Result<MaterialModel> {
    let a = finite("lattice_constant_angstrom", f.lattice_constant_angstrom)?;
    if a <= 0.0 {
        return Err(Error::validation("lattice_constant_angstrom", "must be positive"));
    }
    if f.species.len() != 2 {
        return Err(Error::validation("species", "exactly two sublattice species are required"));
    }
    let homopolar = f.species[0] == f.species[1];
    match (homopolar, f.point_group) {
        (true, PointGroup::Oh) | (false, PointGroup::Td) => {}
        _ => {
            return Err(Error::validation(
                "point_group",
                "diamond structures are Oh, zincblende structures Td",
            ))
        }
    }

    let mut sites = Vec::with_capacity(2);
    for (i, sp) in f.species.iter().enumerate() {
        let table = f
            .onsite
            .get(sp)
            .ok_or_else(|| Error::validation(format!("onsite.{sp}"), "missing table"))?;
        let keys = onsite_keys(f.basis);
        for k in table.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(Error::validation(
                    format!("onsite.{sp}.{k}"),
                    format!("not an orbital of the {} basis", f.basis.label()),
                ));
            }
        }
        let mut onsite = [0.0; 10];
        for k in keys {
            let key = format!("onsite.{sp}.{k}");
            let v = ev_to_hartree(finite(&key, *table.get(*k).ok_or_else(|| Error::validation(&key, "missing"))?)?);
            for (idx, o) in Orbital::ALL.iter().enumerate() {
                let hit = match *k {
                    "s" => *o == Orbital::S,
                    "p" => o.l() == 1,
                    "d" => o.l() == 2,
                    _ => *o == Orbital::SStar,
                };
                if hit {
                    onsite[idx] = v;
                }
            }
        }
        let soc_key = format!("soc.{sp}.lambda_p_ev");
        let lambda = f
            .soc
            .get(sp)
            .ok_or_else(|| Error::validation(&soc_key, "missing"))?
            .lambda_p_ev;
        let lambda_p = ev_to_hartree(finite(&soc_key, lambda)?);
        let dip_key = format!("dipole.{sp}.s_p_bohr");
        let dipole = finite(&dip_key, f.dipole.get(sp).map(|d| d.s_p_bohr).unwrap_or(0.0))?;
        sites.push(Site {
            species: sp.clone(),
            position: SITE_POSITIONS[i],
            onsite,
            lambda_p,
            dipole,
        });
    }

    let fwd = read_pair(&f, &f.species[0], &f.species[1])?;
    let rev = if homopolar { fwd } else { read_pair(&f, &f.species[1], &f.species[0])? };
    check_pair_consistency(&f.species, &fwd, &rev)?;
    for name in f.sk.keys() {
        let ok = name == &format!("{}-{}", f.species[0], f.species[1])
            || name == &format!("{}-{}", f.species[1], f.species[0]);
        if !ok {
            return Err(Error::validation(format!("sk.{name}"), "pair does not match the species list"));
        }
    }

    let bands = f
        .bands
        .iter()
        .map(|(k, v)| (k.clone(), (v[0], v[1])))
        .collect();

    let model = MaterialModel::from_parts(
        f.name,
        angstrom_to_bohr(a),
        f.basis,
        f.point_group,
        sites,
        [fwd, rev],
        bands,
    );
    model.check_band_labels()?;
    Ok(model)
}

fn read_pair(f: &MaterialFile, a: &str, b: &str) -> Result<PairIntegrals> {
    let name = format!("{a}-{b}");
    let table = f
        .sk
        .get(&name)
        .ok_or_else(|| Error::validation(format!("sk.{name}"), "missing table"))?;
    let mut p = PairIntegrals::default();
    let known: Vec<&str> = p.values().iter().map(|(k, _)| *k).collect();
    for k in table.keys() {
        let allowed = known.contains(&k.as_str())
            && (f.basis == Basis::Sp3d5s || integral_required(Basis::Sp3, k));
        if !allowed {
            return Err(Error::validation(
                format!("sk.{name}.{k}"),
                format!("not a two-center integral of the {} basis", f.basis.label()),
            ));
        }
    }
    let get = |key: &str| -> Result<f64> {
        let full = format!("sk.{name}.{key}");
        match table.get(key) {
            Some(v) => Ok(ev_to_hartree(finite(&full, *v)?)),
            None if integral_required(f.basis, key) => Err(Error::validation(full, "missing")),
            None => Ok(0.0),
        }
    };
    p.ss_sigma = get("ss_sigma")?;
    p.s_sstar_sigma = get("s_sstar_sigma")?;
    p.sstar_s_sigma = get("sstar_s_sigma")?;
    p.sstar_sstar_sigma = get("sstar_sstar_sigma")?;
    p.sp_sigma = get("sp_sigma")?;
    p.sstar_p_sigma = get("sstar_p_sigma")?;
    p.sd_sigma = get("sd_sigma")?;
    p.sstar_d_sigma = get("sstar_d_sigma")?;
    p.pp_sigma = get("pp_sigma")?;
    p.pp_pi = get("pp_pi")?;
    p.pd_sigma = get("pd_sigma")?;
    p.pd_pi = get("pd_pi")?;
    p.dd_sigma = get("dd_sigma")?;
    p.dd_pi = get("dd_pi")?;
    p.dd_delta = get("dd_delta")?;
    Ok(p)
}

/// Integrals that do not depend on the order of the pair must agree between A-B and B-A.
fn check_pair_consistency(species: &[String], fwd: &PairIntegrals, rev: &PairIntegrals) -> Result<()> {
    let name = format!("{}-{}", species[1], species[0]);
    let same = |key: &str, x: f64, y: f64| -> Result<()> {
        if (x - y).abs() > 1e-12 {
            Err(Error::validation(
                format!("sk.{name}.{key}"),
                "must equal the value in the reversed pair table",
            ))
        } else {
            Ok(())
        }
    };
    same("ss_sigma", fwd.ss_sigma, rev.ss_sigma)?;
    same("sstar_sstar_sigma", fwd.sstar_sstar_sigma, rev.sstar_sstar_sigma)?;
    same("sstar_s_sigma", fwd.s_sstar_sigma, rev.sstar_s_sigma)?;
    same("s_sstar_sigma", fwd.sstar_s_sigma, rev.s_sstar_sigma)?;
    same("pp_sigma", fwd.pp_sigma, rev.pp_sigma)?;
    same("pp_pi", fwd.pp_pi, rev.pp_pi)?;
    same("dd_sigma", fwd.dd_sigma, rev.dd_sigma)?;
    same("dd_pi", fwd.dd_pi, rev.dd_pi)?;
    same("dd_delta", fwd.dd_delta, rev.dd_delta)
}

impl MaterialModel {
    pub fn from_parts(
        name: String,
        lattice_constant: f64,
        basis: Basis,
        point_group: PointGroup,
        sites: Vec<Site>,
        hopping: [PairIntegrals; 2],
        bands: BTreeMap<String, (usize, usize)>,
    ) -> Self {
        let mut m = MaterialModel {
            name,
            lattice_constant,
            basis,
            point_group,
            sites,
            hopping,
            bands,
            bonds: Vec::new(),
        };
        m.rebuild_bonds();
        m
    }

    fn rebuild_bonds(&mut self) {
        self.bonds.clear();
        if self.sites.len() != 2 {
            return;
        }
        let orbs = self.basis.orbitals();
        let n = orbs.len();
        for d in BOND_DIRECTIONS {
            let v = Vector3::from(d) * (self.lattice_constant / 4.0);
            let u = v.normalize();
            let u = [u.x, u.y, u.z];
            let block = DMatrix::from_fn(n, n, |i, j| {
                slater_koster::element(orbs[i], orbs[j], u, &self.hopping[0], &self.hopping[1])
            });
            self.bonds.push(Bond { vector: v, block });
        }
    }

    pub fn orbitals_per_atom(&self) -> usize {
        self.basis.orbitals_per_atom()
    }

    /// Hamiltonian dimension: sites × orbitals × 2 spins.
    pub fn dim(&self) -> usize {
        2 * self.sites.len() * self.orbitals_per_atom()
    }

    /// Row/column of (spin, site, orbital slot); spin is the slowest index.
    pub fn index(&self, spin: usize, site: usize, orbital: usize) -> usize {
        let n = self.orbitals_per_atom();
        spin * self.sites.len() * n + site * n + orbital
    }

    pub fn is_inversion_symmetric(&self) -> bool {
        self.point_group.has_inversion()
    }

    pub fn band_pair(&self, label: &str) -> Result<(usize, usize)> {
        self.bands
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownBand(label.to_string()))
    }

    /// Copy with every inter-atomic hopping removed.
    pub fn atomic_limit(&self) -> Self {
        let mut m = self.clone();
        m.hopping = [self.hopping[0].scaled(0.0), self.hopping[1].scaled(0.0)];
        m.rebuild_bonds();
        m
    }

    /// Copy with all p-shell spin-orbit constants multiplied by `factor`.
    pub fn with_soc_scale(&self, factor: f64) -> Self {
        let mut m = self.clone();
        for s in &mut m.sites {
            s.lambda_p *= factor;
        }
        m
    }

    /// Copy with the dipole of every site of `species` replaced.
    pub fn with_dipole(&self, species: &str, dipole: f64) -> Self {
        let mut m = self.clone();
        for s in &mut m.sites {
            if s.species == species {
                s.dipole = dipole;
            }
        }
        m
    }

    /// Single-atom model of the first site carrying `species`.
    pub fn isolated_atom(&self, species: &str) -> Result<Self> {
        let site = self
            .sites
            .iter()
            .find(|s| s.species == species)
            .ok_or_else(|| Error::validation("species", format!("`{species}` not present")))?
            .clone();
        let mut m = self.clone();
        m.sites = vec![Site {
            position: [0.0; 3],
            ..site
        }];
        m.bands.clear();
        m.rebuild_bonds();
        Ok(m)
    }

    pub fn species_names(&self) -> Vec<String> {
        let mut v: Vec<String> = Vec::new();
        for s in &self.sites {
            if !v.contains(&s.species) {
                v.push(s.species.clone());
            }
        }
        v
    }

    /// Each configured pair must be a two-fold level at Γ.
    fn check_band_labels(&self) -> Result<()> {
        if self.bands.is_empty() {
            return Ok(());
        }
        let sol = crate::band_solver::solve(self, &Vector3::zeros())?;
        for (label, &(n, m)) in &self.bands {
            let key = format!("bands.{label}");
            if m != n + 1 || m >= self.dim() {
                return Err(Error::validation(key, "must name two adjacent bands inside the spectrum"));
            }
            let e = &sol.energies;
            let split = (e[m] - e[n]).abs();
            let below = if n > 0 { e[n] - e[n - 1] } else { f64::INFINITY };
            let above = if m + 1 < e.len() { e[m + 1] - e[m] } else { f64::INFINITY };
            if split > 1e-8 || below < 1e-6 || above < 1e-6 {
                return Err(Error::validation(key, "bands do not form an isolated two-fold level at Γ"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAAS: &str = include_str!("../../../../materials/gaas.toml");

    fn key_of(text: &str) -> String {
        match parse_material(text) {
            Err(Error::Validation { key, .. }) => key,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn shipped_file_loads() {
        let m = parse_material(GAAS).unwrap();
        assert_eq!(m.name, "GaAs");
        assert_eq!(m.basis, Basis::Sp3);
        assert_eq!(m.species_names(), vec!["As", "Ga"]);
        assert!((m.lattice_constant - 5.6532 / crate::units::BOHR_ANGSTROM).abs() < 1e-12);
        assert_eq!(m.band_pair("split-off").unwrap(), (2, 3));
        assert!(matches!(m.band_pair("nope"), Err(Error::UnknownBand(_))));
        assert_eq!(m.bonds.len(), 4);
    }

    #[test]
    fn negative_lattice_constant_is_named() {
        let t = GAAS.replace("lattice_constant_angstrom = 5.6532", "lattice_constant_angstrom = -1.0");
        assert_eq!(key_of(&t), "lattice_constant_angstrom");
    }

    #[test]
    fn missing_onsite_entry_is_named() {
        let t = GAAS.replace("s = -2.9590\n", "");
        assert_eq!(key_of(&t), "onsite.Ga.s");
    }

    #[test]
    fn missing_soc_is_named() {
        let t = GAAS.replace("[soc.Ga]", "[soc.Gx]");
        assert_eq!(key_of(&t), "soc.Ga.lambda_p_ev");
    }

    #[test]
    fn wrong_point_group_is_rejected() {
        let t = GAAS.replace("point_group = \"Td\"", "point_group = \"Oh\"");
        assert_eq!(key_of(&t), "point_group");
    }

    #[test]
    fn d_integral_in_sp3_file_is_rejected() {
        let t = GAAS.replace("[sk.\"As-Ga\"]\n", "[sk.\"As-Ga\"]\npd_sigma = 1.0\n");
        assert_eq!(key_of(&t), "sk.As-Ga.pd_sigma");
    }

    #[test]
    fn inconsistent_reverse_table_is_rejected() {
        let t = GAAS.replacen("pp_pi = -0.780825", "pp_pi = -0.7", 1);
        assert!(key_of(&t).ends_with(".pp_pi"));
    }

    #[test]
    fn band_label_must_be_isolated_doublet() {
        let t = GAAS.replace("split-off = [2, 3]", "split-off = [3, 4]");
        assert_eq!(key_of(&t), "bands.split-off");
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let t = GAAS.replace("basis = \"sp3\"", "basis = \"sp3\"\ncolour = 1");
        assert!(matches!(parse_material(&t), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(load_material("/nonexistent/x.toml"), Err(Error::Io { .. })));
    }

    #[test]
    fn isolated_atom_has_no_bonds() {
        let m = parse_material(GAAS).unwrap().isolated_atom("Ga").unwrap();
        assert_eq!(m.dim(), 8);
        assert!(m.bonds.is_empty());
        assert!(m.bands.is_empty());
    }
}
