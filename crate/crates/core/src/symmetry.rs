//! Cubic point groups as signed permutation matrices, and the table of
//! directions along which the pair spin densities are related by time reversal.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointGroup {
    Oh,
    Td,
    Th,
    O,
    T,
}

impl fmt::Display for PointGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointGroup::Oh => "Oh",
            PointGroup::Td => "Td",
            PointGroup::Th => "Th",
            PointGroup::O => "O",
            PointGroup::T => "T",
        };
        f.write_str(s)
    }
}

/// Direction families for which ρ̄_S = σ_y ρ_Sᵀ σ_y holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaDirections {
    /// Every direction from Γ.
    All,
    /// Listed families only (expanded by the group action).
    Families(&'static [[i32; 3]]),
    None,
}

impl PointGroup {
    pub fn has_inversion(self) -> bool {
        matches!(self, PointGroup::Oh | PointGroup::Th)
    }

    /// Group elements acting on Cartesian k.
    pub fn operations(self) -> Vec<Matrix3<f64>> {
        signed_permutations()
            .into_iter()
            .filter(|m| {
                let det = m.determinant();
                let prod: f64 = (0..3).map(|r| m.row(r).sum()).product();
                let even_perm = det * prod > 0.0;
                match self {
                    PointGroup::Oh => true,
                    PointGroup::Td => prod > 0.0,
                    PointGroup::O => det > 0.0,
                    PointGroup::T => det > 0.0 && prod > 0.0,
                    PointGroup::Th => even_perm,
                }
            })
            .collect()
    }

    pub fn lemma_directions(self) -> LemmaDirections {
        match self {
            PointGroup::Oh | PointGroup::Th => LemmaDirections::All,
            PointGroup::Td => LemmaDirections::Families(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]),
            PointGroup::O | PointGroup::T => LemmaDirections::None,
        }
    }

    /// True if `dir` lies on one of the tabulated directions (or k = 0).
    pub fn lemma_applies(self, dir: &Vector3<f64>) -> bool {
        let n = dir.norm();
        if n < 1e-12 {
            return true;
        }
        let u = dir / n;
        match self.lemma_directions() {
            LemmaDirections::All => true,
            LemmaDirections::None => false,
            LemmaDirections::Families(fams) => {
                let ops = self.operations();
                fams.iter().any(|f| {
                    let base = Vector3::new(f[0] as f64, f[1] as f64, f[2] as f64).normalize();
                    ops.iter().any(|op| {
                        let img = op * base;
                        (img - u).norm() < 1e-8 || (img + u).norm() < 1e-8
                    })
                })
            }
        }
    }
}

/// All 48 signed 3×3 permutation matrices.
pub fn signed_permutations() -> Vec<Matrix3<f64>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(48);
    for p in PERMS {
        for signs in 0..8u32 {
            let mut m = Matrix3::zeros();
            for r in 0..3 {
                m[(r, p[r])] = if signs >> r & 1 == 1 { -1.0 } else { 1.0 };
            }
            out.push(m);
        }
    }
    out
}

/// Maps a direction into the wedge x ≥ y ≥ z ≥ 0 by sorting absolute components.
pub fn to_cubic_wedge(v: &Vector3<f64>) -> Vector3<f64> {
    let mut c = [v.x.abs(), v.y.abs(), v.z.abs()];
    c.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Vector3::new(c[0], c[1], c[2])
}
