//! Direction sets: subdivided icosahedron and a grid on the cubic irreducible wedge.

use nalgebra::Vector3;
use std::collections::HashMap;

/// Unit vertices of an icosahedron subdivided `level` times (10·4^level + 2 points).
pub fn icosphere(level: u32) -> Vec<Vector3<f64>> {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Vector3::from(*v).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
}

/// Directions in the wedge x ≥ y ≥ z ≥ 0 on a barycentric grid spanned by
/// Δ = (1,0,0), Σ = (1,1,0)/√2 and Λ = (1,1,1)/√3, with 2^(level−1) intervals per edge.
/// Level 4 gives 45 directions, close to 1/48 of the level-4 icosphere.
pub fn cubic_wedge(level: u32) -> Vec<Vector3<f64>> {
    let n = if level == 0 { 1 } else { 1usize << (level - 1) };
    let a = Vector3::new(1.0, 0.0, 0.0);
    let b = Vector3::new(1.0, 1.0, 0.0).normalize();
    let c = Vector3::new(1.0, 1.0, 1.0).normalize();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let k = n - i - j;
            let v = (a * i as f64 + b * j as f64 + c * k as f64) / n as f64;
            out.push(v.normalize());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosphere_vertex_counts() {
        for level in 0..5 {
            assert_eq!(icosphere(level).len(), 10 * 4usize.pow(level) + 2);
        }
    }

    #[test]
    fn icosphere_is_unit() {
        assert!(icosphere(3).iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn wedge_grid_stays_in_wedge() {
        let w = cubic_wedge(4);
        assert_eq!(w.len(), 45);
        for v in &w {
            assert!(v.x + 1e-12 >= v.y && v.y + 1e-12 >= v.z && v.z >= -1e-12);
        }
        assert!(w.iter().any(|v| (v - Vector3::new(1.0, 1.0, 0.0).normalize()).norm() < 1e-12));
    }
}
