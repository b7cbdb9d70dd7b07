//! Radial bisection for det(g) = 0 and assembly of the resulting surfaces.

pub mod directions;
pub mod export;
pub mod ray;

pub use export::{export_cloud, read_cloud_csv, CloudFormat};
pub use ray::{det_sample, scan_ray, Crossing, DetSample, RayFailure, RayResult, ScanConfig, WhichDet};

use crate::crystal_model::lattice::{inside_first_zone, zone_boundary_distance};
use crate::crystal_model::MaterialModel;
use crate::error::{Error, Result};
use crate::symmetry::PointGroup;
use nalgebra::Vector3;
use rayon::prelude::*;

/// Direction sampling for a surface build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaySet {
    /// Full sphere, subdivided icosahedron.
    Icosphere(u32),
    /// Cubic wedge x ≥ y ≥ z ≥ 0, results replicated with the 48 O_h operations.
    Wedge(u32),
}

impl RaySet {
    pub fn directions(&self) -> Vec<Vector3<f64>> {
        match *self {
            RaySet::Icosphere(l) => directions::icosphere(l),
            RaySet::Wedge(l) => directions::cubic_wedge(l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    /// k_c in Bohr⁻¹.
    pub k: Vector3<f64>,
    pub direction_index: usize,
    /// 0-based position of the crossing along its ray.
    pub ordinal: usize,
    pub which: WhichDet,
    pub slope_sign: i8,
    pub beyond_first_zone: bool,
}

#[derive(Clone, Debug)]
pub struct SurfaceCloud {
    pub material: String,
    pub band_id: String,
    pub which: WhichDet,
    pub points: Vec<SurfacePoint>,
    pub symmetry_ops_applied: bool,
    /// Per-ray results in direction order (wedge rays only in wedge mode).
    pub rays: Vec<RayResult>,
}

impl SurfaceCloud {
    /// (direction index, failure) for every failed interval.
    pub fn failure_report(&self) -> Vec<(usize, &RayFailure)> {
        self.rays
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.failures.iter().map(move |f| (i, f)))
            .collect()
    }
}

/// Scans every ray of `ray_set` out to the zone boundary (times the extension
/// multiplier, if any) on a pool of `workers` threads.
pub fn build_surface(
    m: &MaterialModel,
    band_id: &str,
    which: WhichDet,
    ray_set: RaySet,
    cfg: &ScanConfig,
    workers: usize,
) -> Result<SurfaceCloud> {
    m.band_pair(band_id)?;
    if let RaySet::Wedge(_) = ray_set {
        if m.point_group != PointGroup::Oh {
            return Err(Error::Usage(format!(
                "wedge replication needs the full cubic group; {} has {}",
                m.name, m.point_group
            )));
        }
    }
    let dirs = ray_set.directions();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let a = m.lattice_constant;
    let rays: Vec<RayResult> = pool.install(|| {
        dirs.par_iter()
            .map(|d| {
                let r_max = zone_boundary_distance(a, d) * cfg.extended.unwrap_or(1.0);
                scan_ray(m, band_id, d, r_max, which, cfg)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut points = Vec::new();
    for (i, ray) in rays.iter().enumerate() {
        for (ord, c) in ray.crossings.iter().enumerate() {
            let k = ray.direction * c.radius;
            points.push(SurfacePoint {
                k,
                direction_index: i,
                ordinal: ord,
                which,
                slope_sign: c.slope_sign,
                beyond_first_zone: !inside_first_zone(a, &k, 1e-9),
            });
        }
    }
    let symmetry_ops_applied = matches!(ray_set, RaySet::Wedge(_));
    if symmetry_ops_applied {
        points = replicate(&points, &PointGroup::Oh.operations());
    }
    Ok(SurfaceCloud {
        material: m.name.clone(),
        band_id: band_id.to_string(),
        which,
        points,
        symmetry_ops_applied,
        rays,
    })
}

/// Images of every point under `ops`, with coincident images merged.
pub fn replicate(points: &[SurfacePoint], ops: &[nalgebra::Matrix3<f64>]) -> Vec<SurfacePoint> {
    let mut out: Vec<SurfacePoint> = Vec::with_capacity(points.len() * ops.len());
    for p in points {
        let start = out.len();
        for op in ops {
            let k = op * p.k;
            if out[start..].iter().all(|q| (q.k - k).norm() > 1e-12) {
                out.push(SurfacePoint { k, ..*p });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{gaas, si};

    fn point(k: Vector3<f64>) -> SurfacePoint {
        SurfacePoint {
            k,
            direction_index: 0,
            ordinal: 0,
            which: WhichDet::Spin,
            slope_sign: 1,
            beyond_first_zone: false,
        }
    }

    #[test]
    fn replication_counts_orbits() {
        let ops = PointGroup::Oh.operations();
        assert_eq!(replicate(&[point(Vector3::new(0.3, 0.2, 0.1))], &ops).len(), 48);
        assert_eq!(replicate(&[point(Vector3::new(0.3, 0.0, 0.0))], &ops).len(), 6);
        assert_eq!(replicate(&[point(Vector3::new(0.3, 0.3, 0.0))], &ops).len(), 12);
        assert_eq!(replicate(&[point(Vector3::new(0.3, 0.3, 0.3))], &ops).len(), 8);
    }

    #[test]
    fn worker_count_does_not_change_the_cloud() {
        let cfg = ScanConfig { n_coarse: 40, ..ScanConfig::default() };
        let a = build_surface(si(), "split-off", WhichDet::Spin, RaySet::Icosphere(1), &cfg, 1).unwrap();
        let b = build_surface(si(), "split-off", WhichDet::Spin, RaySet::Icosphere(1), &cfg, 4).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.rays.len(), 42);
        assert!(!a.points.is_empty());
    }

    #[test]
    fn wedge_needs_full_cubic_group() {
        let cfg = ScanConfig::default();
        assert!(matches!(
            build_surface(gaas(), "split-off", WhichDet::Spin, RaySet::Wedge(2), &cfg, 1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn wedge_mode_replicates() {
        let cfg = ScanConfig { n_coarse: 40, ..ScanConfig::default() };
        let c = build_surface(si(), "split-off", WhichDet::Spin, RaySet::Wedge(2), &cfg, 2).unwrap();
        assert!(c.symmetry_ops_applied);
        assert_eq!(c.rays.len(), 6);
        // Δ, Σ, Λ corners and the three edge midpoints: 6 + 12 + 8 + 24 + 24 + 24 images.
        assert_eq!(c.points.len(), 98);
        assert!(c.points.iter().all(|p| !p.beyond_first_zone));
    }

    #[test]
    fn replicated_points_match_direct_scans() {
        let cfg = ScanConfig { n_coarse: 40, ..ScanConfig::default() };
        let c = build_surface(si(), "split-off", WhichDet::Spin, RaySet::Wedge(2), &cfg, 2).unwrap();
        for p in c.points.iter().step_by(7) {
            let r = p.k.norm();
            let dir = p.k / r;
            let rmax = zone_boundary_distance(si().lattice_constant, &dir);
            let direct = scan_ray(si(), "split-off", &dir, rmax, WhichDet::Spin, &cfg).unwrap();
            let nearest = direct.crossings.iter().map(|x| (x.radius - r).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 2.0 * cfg.bisect_tol, "{:?}: {nearest:e}", p.k);
        }
    }
}
