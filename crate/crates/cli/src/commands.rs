//! The individual subcommands. Each returns the complete file contents.

use crate::provenance::{file_digest, Provenance};
use gfactor::band_solver::{select_pair, solve};
use gfactor::crystal_model::lattice::{parse_direction, symmetry_point, zone_boundary_distance};
use gfactor::crystal_model::{load_material, MaterialModel, Wavevector};
use gfactor::entanglement::{cardinal_entropies, check_lemma, entropy, spin_density};
use gfactor::magnetic_response::atomfit::{atomfit, isotropic};
use gfactor::magnetic_response::rotation::v_aligned_pair;
use gfactor::magnetic_response::{g_total, pair_momentum, GTensorSet, Svd3, ENERGY_FLOOR};
use gfactor::surface_scan::export::{write_csv, write_ply};
use gfactor::surface_scan::{build_surface, scan_ray, CloudFormat, RaySet, ScanConfig, WhichDet};
use gfactor::{Error, Result};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Loads a material and records its path and content digest.
pub fn load(path: &Path, prov: &mut Provenance) -> Result<MaterialModel> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let m = load_material(path)?;
    prov.push("material", path.display());
    prov.push("material_sha256", file_digest(&bytes));
    Ok(m)
}

fn fmt_vec(v: &Wavevector) -> String {
    format!("{},{},{}", num(v.x), num(v.y), num(v.z))
}

pub fn bands(m: &MaterialModel, path_spec: &str, samples: usize, prov: &mut Provenance) -> Result<String> {
    let labels: Vec<&str> = path_spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if labels.is_empty() {
        return Err(Error::Usage("empty k-path".into()));
    }
    if samples == 0 {
        return Err(Error::Usage("--samples must be at least 1".into()));
    }
    let scale = 2.0 * PI / m.lattice_constant;
    let nodes = labels
        .iter()
        .map(|l| {
            symmetry_point(l)
                .map(|p| Wavevector::from(p) * scale)
                .ok_or_else(|| Error::Usage(format!("unknown symmetry point `{l}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    prov.push("path", labels.join(","));
    prov.push("samples_per_segment", samples);

    let mut points: Vec<(f64, Wavevector, &str)> = vec![(0.0, nodes[0], labels[0])];
    for i in 1..nodes.len() {
        let (a, b) = (nodes[i - 1], nodes[i]);
        let s0 = points.last().unwrap().0;
        for j in 1..=samples {
            let t = j as f64 / samples as f64;
            let label = if j == samples { labels[i] } else { "" };
            points.push((s0 + t * (b - a).norm(), a + (b - a) * t, label));
        }
    }

    let mut out = prov.header();
    out.push_str("# energies in Hartree, k in Bohr^-1, s = path length\n");
    let mut head = String::from("s,kx,ky,kz,label");
    for n in 0..m.dim() {
        write!(head, ",E{n}").unwrap();
    }
    out.push_str(&head);
    out.push('\n');
    for (s, k, label) in points {
        let sol = solve(m, &k)?;
        write!(out, "{},{},{label}", num(s), fmt_vec(&k)).unwrap();
        for e in &sol.energies {
            write!(out, ",{}", num(*e)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Direction and radial grid shared by `gline` and `entropy`.
pub struct RaySpec {
    pub dir: Wavevector,
    pub r_max: f64,
    pub samples: usize,
}

pub fn ray_spec(m: &MaterialModel, direction: &str, seed: u64, rmax: Option<f64>, samples: usize, prov: &mut Provenance) -> Result<RaySpec> {
    let dir = parse_direction(direction, seed)?;
    let r_max = rmax.unwrap_or_else(|| zone_boundary_distance(m.lattice_constant, &dir));
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::Usage(format!("--rmax must be positive, got {r_max}")));
    }
    if samples < 2 {
        return Err(Error::Usage("--samples must be at least 2".into()));
    }
    prov.push("direction", direction);
    prov.push("direction_unit", fmt_vec(&dir));
    prov.push("rmax", num(r_max));
    prov.push("samples", samples);
    Ok(RaySpec { dir, r_max, samples })
}

impl RaySpec {
    fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |i| self.r_max * i as f64 / (self.samples - 1) as f64)
    }
}

/// Entropies of ξ and ξ̄ in the frame where g_S = ±U·Σ.
fn aligned_entropies(pair: &gfactor::band_solver::KramersPair, svd: &Svd3) -> (f64, f64) {
    let sd = spin_density(&v_aligned_pair(pair, svd));
    (entropy(&sd.rho), entropy(&sd.rho_bar))
}

fn tensors_at(m: &MaterialModel, band: &str, k: &Wavevector) -> Result<(gfactor::band_solver::KramersPair, GTensorSet)> {
    let sol = solve(m, k)?;
    let pair = select_pair(m, &sol, band)?;
    let pm = pair_momentum(m, &sol, &pair);
    let g = g_total(&pair, &sol, &pm, ENERGY_FLOOR)?;
    Ok((pair, g))
}

/// Physics failures become a status entry; anything else aborts.
fn row_status<T>(r: Result<T>) -> Result<std::result::Result<T, &'static str>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_physics() => Ok(Err(e.code())),
        Err(e) => Err(e),
    }
}

pub fn gline(m: &MaterialModel, band: &str, ray: &RaySpec, prov: &mut Provenance) -> Result<String> {
    m.band_pair(band)?;
    prov.push("band", band);
    let mut out = prov.header();
    out.push_str("# r in Bohr^-1; sv = singular values (descending); entropies of the pair states in the principal frame of g_S\n");
    out.push_str("r,kx,ky,kz,sv_s1,sv_s2,sv_s3,det_gs,sv_tot1,sv_tot2,sv_tot3,det_gtot,entropy_xi,entropy_xibar,status\n");
    for r in ray.radii() {
        let k = ray.dir * r;
        write!(out, "{},{}", num(r), fmt_vec(&k)).unwrap();
        match row_status(tensors_at(m, band, &k))? {
            Ok((pair, g)) => {
                let (a, b) = aligned_entropies(&pair, &g.svd_s);
                let s = &g.svd_s.sigma;
                let t = &g.svd_tot.sigma;
                writeln!(
                    out,
                    ",{},{},{},{},{},{},{},{},{},{},ok",
                    num(s[0]),
                    num(s[1]),
                    num(s[2]),
                    num(g.det_gs),
                    num(t[0]),
                    num(t[1]),
                    num(t[2]),
                    num(g.det_gtot),
                    num(a),
                    num(b)
                )
                .unwrap();
            }
            Err(code) => {
                out.push_str(&",nan".repeat(10));
                writeln!(out, ",{code}").unwrap();
            }
        }
    }
    Ok(out)
}

pub fn entropy_table(m: &MaterialModel, band: &str, ray: &RaySpec, prov: &mut Provenance) -> Result<String> {
    let idx = m.band_pair(band)?;
    let _ = idx;
    prov.push("band", band);
    let cfg = ScanConfig::default();
    let scan = scan_ray(m, band, &ray.dir, ray.r_max, WhichDet::Spin, &cfg)?;

    let mut out = prov.header();
    if !m.point_group.lemma_applies(&ray.dir) {
        writeln!(
            out,
            "# lemma check refused: not applicable for point group {} along this direction; lemma_residual is n/a",
            m.point_group
        )
        .unwrap();
    }
    out.push_str("# kind = sample (radial grid) or k_c (bisected det(g_S) = 0); entropies in the principal frame of g_S\n");
    out.push_str("# cardinal states: (xi +- xi_bar)/sqrt2 and (xi +- i xi_bar)/sqrt2\n");
    out.push_str("kind,r,kx,ky,kz,det_gs,entropy_xi,entropy_xibar,lemma_residual,card_plus,card_minus,card_plus_i,card_minus_i,status\n");

    let rows = ray
        .radii()
        .map(|r| ("sample", r))
        .chain(scan.crossings.iter().map(|c| ("k_c", c.radius)));
    for (kind, r) in rows {
        let k = ray.dir * r;
        write!(out, "{kind},{},{}", num(r), fmt_vec(&k)).unwrap();
        let sol = solve(m, &k)?;
        match row_status(select_pair(m, &sol, band))? {
            Ok(pair) => {
                let svd = Svd3::new(&gfactor::magnetic_response::spin_g(&pair));
                let (a, b) = aligned_entropies(&pair, &svd);
                let lemma = match check_lemma(&pair, m.point_group) {
                    Ok(res) => num(res),
                    Err(Error::DirectionNotApplicable { .. }) => "n/a".to_string(),
                    Err(e) => return Err(e),
                };
                let c = cardinal_entropies(&pair, &svd);
                writeln!(
                    out,
                    ",{},{},{},{lemma},{},{},{},{},ok",
                    num(svd.det()),
                    num(a),
                    num(b),
                    num(c[0]),
                    num(c[1]),
                    num(c[2]),
                    num(c[3])
                )
                .unwrap();
            }
            Err(code) => {
                out.push_str(&",nan".repeat(8));
                writeln!(out, ",{code}").unwrap();
            }
        }
    }
    Ok(out)
}

pub struct SurfaceArgs {
    pub band: String,
    pub which: WhichDet,
    pub rays: RaySet,
    pub n_coarse: usize,
    pub extended: Option<f64>,
    pub workers: usize,
    pub format: CloudFormat,
}

pub fn surface(m: &MaterialModel, a: &SurfaceArgs, prov: &mut Provenance) -> Result<(Vec<u8>, Vec<String>)> {
    if a.n_coarse < 2 {
        return Err(Error::Usage("--samples must be at least 2".into()));
    }
    if let Some(x) = a.extended {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::Usage(format!("--extended must be at least 1, got {x}")));
        }
    }
    let cfg = ScanConfig {
        n_coarse: a.n_coarse,
        extended: a.extended,
        ..ScanConfig::default()
    };
    prov.push("band", &a.band);
    prov.push("det", a.which);
    prov.push(
        "rays",
        match a.rays {
            RaySet::Icosphere(l) => format!("icosphere level {l}"),
            RaySet::Wedge(l) => format!("wedge level {l} replicated over Oh"),
        },
    );
    prov.push("n_coarse", cfg.n_coarse);
    prov.push("bisect_tol", num(cfg.bisect_tol));
    prov.push("det_tol", num(cfg.det_tol));
    prov.push("extended", a.extended.map(num).unwrap_or_else(|| "off".into()));
    let cloud = build_surface(m, &a.band, a.which, a.rays, &cfg, a.workers)?;
    let failures = cloud.failure_report();
    let mut comments = prov.lines();
    comments.push(format!("rays_scanned {}", cloud.rays.len()));
    comments.push(format!("points {}", cloud.points.len()));
    comments.push(format!("failed_intervals {}", failures.len()));
    let mut buf = Vec::new();
    match a.format {
        CloudFormat::Csv => write_csv(&cloud, &comments, &mut buf),
        CloudFormat::Ply => write_ply(&cloud, &comments, &mut buf),
    }
    .map_err(|e| Error::Internal(e.to_string()))?;
    let notes = failures
        .iter()
        .map(|(i, f)| format!("ray {i}: [{:.6e}, {:.6e}] {}", f.interval.0, f.interval.1, f.reason))
        .collect();
    Ok((buf, notes))
}

pub fn atomfit_table(m: &MaterialModel, species: Option<&str>, target: f64, prov: &mut Provenance) -> Result<String> {
    let names = match species {
        Some(s) => vec![s.to_string()],
        None => m.species_names(),
    };
    prov.push("species", names.join(","));
    prov.push("target", num(target));
    let mut out = prov.header();
    out.push_str("# dipole = fitted on-site <s|x|p_x> in Bohr; g columns are signed cube roots of det\n");
    out.push_str("species,dipole_bohr,g_tot,g_s,g_l\n");
    for s in &names {
        let fit = atomfit(m, s, target)?;
        let t = &fit.tensors;
        writeln!(
            out,
            "{s},{},{},{},{}",
            num(fit.dipole),
            num(isotropic(&t.g_tot)),
            num(isotropic(&t.g_s)),
            num(isotropic(&t.g_l))
        )
        .unwrap();
    }
    Ok(out)
}
