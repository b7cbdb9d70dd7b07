//! Sign changes of det(g) along a ray from Γ: coarse bracketing then bisection.

use crate::band_solver::{select_pair_indices, solve, PairPolicy};
use crate::crystal_model::lattice::zone_boundary_distance;
use crate::crystal_model::{MaterialModel, Wavevector};
use crate::error::{Error, Result};
use crate::magnetic_response::gtensor::{orbital_g, spin_g, Svd3};
use crate::magnetic_response::momentum::pair_momentum;
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which determinant is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WhichDet {
    #[serde(rename = "gs")]
    Spin,
    #[serde(rename = "gtot")]
    Total,
}

impl WhichDet {
    pub fn label(self) -> &'static str {
        match self {
            WhichDet::Spin => "gs",
            WhichDet::Total => "gtot",
        }
    }

    pub fn code(self) -> i32 {
        match self {
            WhichDet::Spin => 0,
            WhichDet::Total => 1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gs" => Ok(WhichDet::Spin),
            "gtot" => Ok(WhichDet::Total),
            other => Err(Error::Usage(format!("unknown determinant `{other}` (expected gs or gtot)"))),
        }
    }
}

impl fmt::Display for WhichDet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    pub n_coarse: usize,
    /// Radial bisection tolerance (Bohr⁻¹).
    pub bisect_tol: f64,
    /// Bisection keeps halving past `bisect_tol` until |det| at the midpoint drops below this.
    pub det_tol: f64,
    pub energy_floor: f64,
    /// If set, rays may run to this multiple of the zone-boundary distance.
    pub extended: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_coarse: 200,
            bisect_tol: 1e-6,
            det_tol: 1e-6,
            energy_floor: crate::magnetic_response::ENERGY_FLOOR,
            extended: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub radius: f64,
    pub which: WhichDet,
    pub bracket_width: f64,
    /// det(g) at `radius`.
    pub det: f64,
    /// +1 when det goes from negative to positive with increasing radius.
    pub slope_sign: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayFailure {
    pub interval: (f64, f64),
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct RayResult {
    pub direction: Vector3<f64>,
    pub r_max: f64,
    /// True when the requested r_max was cut back to the zone boundary.
    pub clipped: bool,
    pub crossings: Vec<Crossing>,
    pub failures: Vec<RayFailure>,
}

/// Evaluates det(g) at one k for the pair (n, m).
#[derive(Clone, Copy, Debug)]
pub struct DetSample {
    pub sign: f64,
    pub det: f64,
}

pub fn det_sample(m: &MaterialModel, pair_idx: (usize, usize), which: WhichDet, k: &Wavevector, floor: f64) -> Result<DetSample> {
    let sol = solve(m, k)?;
    let pair = select_pair_indices(&sol, pair_idx, PairPolicy::for_model(m))?;
    let g = match which {
        WhichDet::Spin => spin_g(&pair),
        WhichDet::Total => {
            let pm = pair_momentum(m, &sol, &pair);
            spin_g(&pair) + orbital_g(&pair, &sol, &pm, floor)?
        }
    };
    let svd = Svd3::new(&g);
    Ok(DetSample {
        sign: svd.det_sign(),
        det: svd.det(),
    })
}

/// Radius actually scanned and whether it was clipped.
pub fn effective_rmax(m: &MaterialModel, dir: &Vector3<f64>, r_max: f64, cfg: &ScanConfig) -> (f64, bool) {
    let limit = zone_boundary_distance(m.lattice_constant, dir) * cfg.extended.unwrap_or(1.0);
    if r_max > limit {
        (limit, true)
    } else {
        (r_max, false)
    }
}

fn physics_or_fail<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_physics() => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

pub fn scan_ray(
    m: &MaterialModel,
    band_id: &str,
    direction: &Vector3<f64>,
    r_max: f64,
    which: WhichDet,
    cfg: &ScanConfig,
) -> Result<RayResult> {
    let idx = m.band_pair(band_id)?;
    let dir = direction.normalize();
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::Usage(format!("r_max must be positive, got {r_max}")));
    }
    if cfg.n_coarse < 2 {
        return Err(Error::Usage("n_coarse must be at least 2".into()));
    }
    let (r_end, clipped) = effective_rmax(m, &dir, r_max, cfg);
    let eval = |r: f64| physics_or_fail(det_sample(m, idx, which, &(dir * r), cfg.energy_floor));

    let n = cfg.n_coarse;
    let radii: Vec<f64> = (0..=n).map(|i| r_end * i as f64 / n as f64).collect();
    let mut samples = Vec::with_capacity(radii.len());
    for &r in &radii {
        samples.push(eval(r)?);
    }

    let mut crossings = Vec::new();
    let mut failures: Vec<RayFailure> = Vec::new();
    let push_failure = |lo: f64, hi: f64, reason: String, failures: &mut Vec<RayFailure>| {
        if let Some(last) = failures.last_mut() {
            if last.interval.1 >= lo && last.reason == reason {
                last.interval.1 = hi;
                return;
            }
        }
        failures.push(RayFailure { interval: (lo, hi), reason });
    };

    for i in 0..radii.len() {
        if let Err(reason) = &samples[i] {
            let lo = radii[i.saturating_sub(1)];
            let hi = radii[(i + 1).min(n)];
            push_failure(lo, hi, reason.clone(), &mut failures);
        }
    }

    // Brackets (lo, hi, sign at lo) to be bisected.
    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..n {
        let (Ok(a), Ok(b)) = (&samples[i], &samples[i + 1]) else {
            continue;
        };
        if a.sign != b.sign {
            brackets.push((radii[i], radii[i + 1], a.sign));
        }
    }

    // A local minimum of |det| between same-sign samples may hide a close pair of roots.
    for i in 1..n {
        let (Ok(a), Ok(b), Ok(c)) = (&samples[i - 1], &samples[i], &samples[i + 1]) else {
            continue;
        };
        if a.sign != b.sign || b.sign != c.sign || !(b.det.abs() < a.det.abs() && b.det.abs() <= c.det.abs()) {
            continue;
        }
        // Parabola through the three samples; skip flat stretches where the dip is only rounding noise.
        let (fa, fb, fc) = (a.det.abs(), b.det.abs(), c.det.abs());
        let curv = fa - 2.0 * fb + fc;
        let vertex = if curv > 0.0 { fb - (fc - fa).powi(2) / (8.0 * curv) } else { fb };
        if vertex >= fb * (1.0 - 1e-9) {
            continue;
        }
        let s = b.sign;
        match golden_dip(&eval, radii[i - 1], radii[i + 1], s, cfg.bisect_tol)? {
            Dip::Flip(r) => {
                brackets.push((radii[i - 1], r, s));
                brackets.push((r, radii[i + 1], -s));
            }
            Dip::None => {}
            Dip::Failed(lo, hi, reason) => push_failure(lo, hi, reason, &mut failures),
        }
    }
    brackets.sort_by(|x, y| x.0.total_cmp(&y.0));

    for (lo0, hi0, s_lo) in brackets {
        let (mut lo, mut hi) = (lo0, hi0);
        let mut broken = None;
        let mut best: Option<(f64, f64)> = None;
        loop {
            let mid = 0.5 * (lo + hi);
            let converged = hi - lo <= cfg.bisect_tol;
            if let Some((_, det)) = best {
                if converged && (det.abs() < cfg.det_tol || mid == lo || mid == hi) {
                    break;
                }
            }
            match eval(mid)? {
                Ok(s) => {
                    if s.sign == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    best = Some((mid, s.det));
                }
                Err(reason) => {
                    broken = Some(reason);
                    break;
                }
            }
        }
        match (broken, best) {
            (Some(reason), _) => push_failure(lo, hi, reason, &mut failures),
            (None, Some((radius, det))) => crossings.push(Crossing {
                radius,
                which,
                bracket_width: hi - lo,
                det,
                slope_sign: if s_lo < 0.0 { 1 } else { -1 },
            }),
            (None, None) => unreachable!("bisection evaluates at least once"),
        }
    }
    failures.sort_by(|x, y| x.interval.0.total_cmp(&y.interval.0));

    Ok(RayResult {
        direction: dir,
        r_max: r_end,
        clipped,
        crossings,
        failures,
    })
}

enum Dip {
    Flip(f64),
    None,
    Failed(f64, f64, String),
}

/// Golden-section search for the minimum of `sign * det` on [lo, hi]; stops at the first
/// point whose sign differs from `sign`.
fn golden_dip<F>(eval: &F, lo: f64, hi: f64, sign: f64, tol: f64) -> Result<Dip>
where
    F: Fn(f64) -> Result<std::result::Result<DetSample, String>>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let value = |r: f64| -> Result<std::result::Result<(f64, bool), String>> {
        Ok(eval(r)?.map(|s| (sign * s.det, s.sign != sign)))
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = match value(x1)? {
        Ok((_, true)) => return Ok(Dip::Flip(x1)),
        Ok((f, false)) => f,
        Err(reason) => return Ok(Dip::Failed(a, b, reason)),
    };
    let mut f2 = match value(x2)? {
        Ok((_, true)) => return Ok(Dip::Flip(x2)),
        Ok((f, false)) => f,
        Err(reason) => return Ok(Dip::Failed(a, b, reason)),
    };
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = match value(x1)? {
                Ok((_, true)) => return Ok(Dip::Flip(x1)),
                Ok((f, false)) => f,
                Err(reason) => return Ok(Dip::Failed(a, b, reason)),
            };
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = match value(x2)? {
                Ok((_, true)) => return Ok(Dip::Flip(x2)),
                Ok((f, false)) => f,
                Err(reason) => return Ok(Dip::Failed(a, b, reason)),
            };
        }
    }
    Ok(Dip::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::si;

    fn boundary(d: &Vector3<f64>) -> f64 {
        zone_boundary_distance(si().lattice_constant, d)
    }

    #[test]
    fn crossings_are_bracketed() {
        let d = Vector3::new(0.3, 0.5, 0.8).normalize();
        let cfg = ScanConfig::default();
        let r = scan_ray(si(), "first-conduction", &d, boundary(&d), WhichDet::Spin, &cfg).unwrap();
        assert_eq!(r.crossings.len(), 1);
        let idx = si().band_pair("first-conduction").unwrap();
        for c in &r.crossings {
            assert!(c.det.abs() < cfg.det_tol);
            let lo = det_sample(si(), idx, WhichDet::Spin, &(d * (c.radius - cfg.bisect_tol)), cfg.energy_floor).unwrap();
            let hi = det_sample(si(), idx, WhichDet::Spin, &(d * (c.radius + cfg.bisect_tol)), cfg.energy_floor).unwrap();
            assert_ne!(lo.sign, hi.sign);
            assert_eq!(c.slope_sign as f64, hi.sign);
        }
    }

    #[test]
    fn refinement_never_loses_crossings() {
        let d = Vector3::new(1.0, 1.0, 0.3).normalize();
        let mut last = 0;
        for n in [25, 50, 100, 200] {
            let cfg = ScanConfig { n_coarse: n, ..ScanConfig::default() };
            let r = scan_ray(si(), "first-conduction", &d, boundary(&d), WhichDet::Spin, &cfg).unwrap();
            assert!(r.crossings.len() >= last, "n_coarse {n}");
            last = r.crossings.len();
        }
        assert_eq!(last, 3);
    }

    #[test]
    fn rmax_is_clipped_to_the_zone() {
        let d = Vector3::new(0.0, 0.0, 1.0);
        let cfg = ScanConfig { n_coarse: 10, ..ScanConfig::default() };
        let r = scan_ray(si(), "split-off", &d, 10.0, WhichDet::Spin, &cfg).unwrap();
        assert!(r.clipped);
        assert!((r.r_max - boundary(&d)).abs() < 1e-12);
        let ext = ScanConfig { extended: Some(2.0), ..cfg };
        assert!((effective_rmax(si(), &d, 10.0, &ext).0 - 2.0 * boundary(&d)).abs() < 1e-12);
    }

    #[test]
    fn four_fold_endpoint_is_reported_not_fatal() {
        let d = Vector3::new(1.0, 0.0, 0.0);
        let r = scan_ray(si(), "first-conduction", &d, boundary(&d), WhichDet::Spin, &ScanConfig::default()).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.failures.len(), 1);
        assert!((r.failures[0].interval.1 - r.r_max).abs() < 1e-12);
    }

    #[test]
    fn no_soc_no_surface() {
        let m = si().with_soc_scale(0.0);
        let d = Vector3::new(0.3, 0.5, 0.8).normalize();
        let r = scan_ray(&m, "first-conduction", &d, boundary(&d), WhichDet::Spin, &ScanConfig::default()).unwrap();
        assert!(r.crossings.is_empty());
    }

    #[test]
    fn bad_arguments_are_usage_errors() {
        let d = Vector3::new(1.0, 0.0, 0.0);
        let cfg = ScanConfig::default();
        assert!(matches!(scan_ray(si(), "split-off", &d, -1.0, WhichDet::Spin, &cfg), Err(Error::Usage(_))));
        let few = ScanConfig { n_coarse: 1, ..cfg };
        assert!(matches!(scan_ray(si(), "split-off", &d, 0.1, WhichDet::Spin, &few), Err(Error::Usage(_))));
        assert!(matches!(scan_ray(si(), "nope", &d, 0.1, WhichDet::Spin, &cfg), Err(Error::UnknownBand(_))));
        assert!(WhichDet::parse("gz").is_err());
        assert_eq!(WhichDet::parse("gtot").unwrap(), WhichDet::Total);
    }
}
