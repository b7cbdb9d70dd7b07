//! FCC reciprocal-space geometry: high-symmetry points, zone boundary, directions.

use crate::error::{Error, Result};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// High-symmetry points of the FCC zone in units of 2π/a.
pub const HIGH_SYMMETRY_POINTS: [(&str, [f64; 3]); 6] = [
    ("G", [0.0, 0.0, 0.0]),
    ("X", [1.0, 0.0, 0.0]),
    ("L", [0.5, 0.5, 0.5]),
    ("K", [0.75, 0.75, 0.0]),
    ("W", [1.0, 0.5, 0.0]),
    ("U", [1.0, 0.25, 0.25]),
];

/// High-symmetry lines through Γ.
pub const HIGH_SYMMETRY_LINES: [(&str, [f64; 3]); 3] = [
    ("delta", [1.0, 0.0, 0.0]),
    ("sigma", [1.0, 1.0, 0.0]),
    ("lambda", [1.0, 1.0, 1.0]),
];

/// Point in 2π/a units for a label; accepts "G", "Gamma" or "Γ".
pub fn symmetry_point(label: &str) -> Option<[f64; 3]> {
    let key = match label {
        "Gamma" | "Γ" | "g" => "G",
        other => other,
    };
    HIGH_SYMMETRY_POINTS
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(key))
        .map(|(_, p)| *p)
}

/// Unit vector along a named line (Δ, Σ, Λ).
pub fn symmetry_line(label: &str) -> Option<Vector3<f64>> {
    let key = match label {
        "Δ" => "delta",
        "Σ" => "sigma",
        "Λ" => "lambda",
        other => other,
    };
    HIGH_SYMMETRY_LINES
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(key))
        .map(|(_, d)| Vector3::from(*d).normalize())
}

/// Primitive reciprocal vectors of the FCC lattice with cubic constant `a` (Bohr).
pub fn reciprocal_vectors(a: f64) -> [Vector3<f64>; 3] {
    let f = 2.0 * PI / a;
    [
        Vector3::new(-f, f, f),
        Vector3::new(f, -f, f),
        Vector3::new(f, f, -f),
    ]
}

/// Radius at which the ray along `u` leaves the first Brillouin zone
/// (square faces at |k_i| = 2π/a, hexagonal faces at Σ|k_i| = 3π/a).
pub fn zone_boundary_distance(a: f64, u: &Vector3<f64>) -> f64 {
    let u = u.normalize();
    let square = u.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    let hex: f64 = u.iter().map(|c| c.abs()).sum();
    (2.0 * PI / (a * square)).min(3.0 * PI / (a * hex))
}

pub fn inside_first_zone(a: f64, k: &Vector3<f64>, tol: f64) -> bool {
    let square = k.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    let hex: f64 = k.iter().map(|c| c.abs()).sum();
    square <= 2.0 * PI / a + tol && hex <= 3.0 * PI / a + tol
}

/// Seeded, uniformly distributed unit vector.
pub fn random_direction(seed: u64) -> Vector3<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_direction_from(&mut rng)
}

pub fn random_direction_from<R: rand::Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n: f64 = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Parses "x,y,z", a named line or "random" (with `seed`) into a unit vector.
pub fn parse_direction(spec: &str, seed: u64) -> Result<Vector3<f64>> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("random") {
        return Ok(random_direction(seed));
    }
    if let Some(d) = symmetry_line(spec) {
        return Ok(d);
    }
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!("direction `{spec}` is not x,y,z, a line name or `random`")));
    }
    let mut v = Vector3::zeros();
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Usage(format!("direction component `{p}` is not a number")))?;
    }
    let n = v.norm();
    if !n.is_finite() || n < 1e-12 {
        return Err(Error::Usage(format!("direction `{spec}` has zero or non-finite length")));
    }
    Ok(v / n)
}
