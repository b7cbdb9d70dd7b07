//! Two-center Slater–Koster matrix elements.
//!
//! `element(o1, o2, u, fwd, rev)` is ⟨o1 on atom A | H | o2 on atom B⟩ for a bond
//! A→B with unit vector `u`. `fwd` holds the integrals of the ordered pair (A, B),
//! `rev` those of (B, A); the latter are only consulted when o1 has higher angular
//! momentum than o2.

use super::orbital::Orbital;
use serde::{Deserialize, Serialize};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Two-center integrals of an ordered species pair. The first orbital letter
/// sits on the first species.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairIntegrals {
    pub ss_sigma: f64,
    pub s_sstar_sigma: f64,
    pub sstar_s_sigma: f64,
    pub sstar_sstar_sigma: f64,
    pub sp_sigma: f64,
    pub sstar_p_sigma: f64,
    pub sd_sigma: f64,
    pub sstar_d_sigma: f64,
    pub pp_sigma: f64,
    pub pp_pi: f64,
    pub pd_sigma: f64,
    pub pd_pi: f64,
    pub dd_sigma: f64,
    pub dd_pi: f64,
    pub dd_delta: f64,
}

impl PairIntegrals {
    pub fn scaled(&self, f: f64) -> Self {
        PairIntegrals {
            ss_sigma: self.ss_sigma * f,
            s_sstar_sigma: self.s_sstar_sigma * f,
            sstar_s_sigma: self.sstar_s_sigma * f,
            sstar_sstar_sigma: self.sstar_sstar_sigma * f,
            sp_sigma: self.sp_sigma * f,
            sstar_p_sigma: self.sstar_p_sigma * f,
            sd_sigma: self.sd_sigma * f,
            sstar_d_sigma: self.sstar_d_sigma * f,
            pp_sigma: self.pp_sigma * f,
            pp_pi: self.pp_pi * f,
            pd_sigma: self.pd_sigma * f,
            pd_pi: self.pd_pi * f,
            dd_sigma: self.dd_sigma * f,
            dd_pi: self.dd_pi * f,
            dd_delta: self.dd_delta * f,
        }
    }

    pub fn values(&self) -> [(&'static str, f64); 15] {
        [
            ("ss_sigma", self.ss_sigma),
            ("s_sstar_sigma", self.s_sstar_sigma),
            ("sstar_s_sigma", self.sstar_s_sigma),
            ("sstar_sstar_sigma", self.sstar_sstar_sigma),
            ("sp_sigma", self.sp_sigma),
            ("sstar_p_sigma", self.sstar_p_sigma),
            ("sd_sigma", self.sd_sigma),
            ("sstar_d_sigma", self.sstar_d_sigma),
            ("pp_sigma", self.pp_sigma),
            ("pp_pi", self.pp_pi),
            ("pd_sigma", self.pd_sigma),
            ("pd_pi", self.pd_pi),
            ("dd_sigma", self.dd_sigma),
            ("dd_pi", self.dd_pi),
            ("dd_delta", self.dd_delta),
        ]
    }
}

pub fn element(o1: Orbital, o2: Orbital, u: [f64; 3], fwd: &PairIntegrals, rev: &PairIntegrals) -> f64 {
    if o1.l() > o2.l() {
        let parity = if (o1.l() + o2.l()) % 2 == 0 { 1.0 } else { -1.0 };
        return parity * canonical(o2, o1, u, rev);
    }
    canonical(o1, o2, u, fwd)
}

/// Table entries for l(o1) ≤ l(o2).
fn canonical(o1: Orbital, o2: Orbital, u: [f64; 3], v: &PairIntegrals) -> f64 {
    use Orbital::*;
    match (o1, o2) {
        (S, S) => v.ss_sigma,
        (S, SStar) => v.s_sstar_sigma,
        (SStar, S) => v.sstar_s_sigma,
        (SStar, SStar) => v.sstar_sstar_sigma,
        (S, p) | (SStar, p) if p.l() == 1 => {
            let vs = if o1 == S { v.sp_sigma } else { v.sstar_p_sigma };
            u[p.p_axis().unwrap()] * vs
        }
        (S, d) | (SStar, d) if d.l() == 2 => {
            let vs = if o1 == S { v.sd_sigma } else { v.sstar_d_sigma };
            s_d(d.d_index().unwrap(), u) * vs
        }
        (p1, p2) if p1.l() == 1 && p2.l() == 1 => {
            let (i, j) = (p1.p_axis().unwrap(), p2.p_axis().unwrap());
            let delta = if i == j { 1.0 } else { 0.0 };
            u[i] * u[j] * (v.pp_sigma - v.pp_pi) + delta * v.pp_pi
        }
        (p, d) if p.l() == 1 && d.l() == 2 => {
            let (a, b) = p_d(p.p_axis().unwrap(), d.d_index().unwrap(), u);
            a * v.pd_sigma + b * v.pd_pi
        }
        (d1, d2) if d1.l() == 2 && d2.l() == 2 => {
            let (i, j) = (d1.d_index().unwrap(), d2.d_index().unwrap());
            let (a, b, c) = if i <= j { d_d(i, j, u) } else { d_d(j, i, u) };
            a * v.dd_sigma + b * v.dd_pi + c * v.dd_delta
        }
        _ => unreachable!("canonical called with l(o1) > l(o2)"),
    }
}

fn s_d(d: usize, [l, m, n]: [f64; 3]) -> f64 {
    match d {
        0 => SQRT3 * l * m,
        1 => SQRT3 * m * n,
        2 => SQRT3 * n * l,
        3 => 0.5 * SQRT3 * (l * l - m * m),
        _ => n * n - 0.5 * (l * l + m * m),
    }
}

/// (σ, π) coefficients of ⟨p_i|H|d_j⟩.
fn p_d(p: usize, d: usize, [l, m, n]: [f64; 3]) -> (f64, f64) {
    let (l2, m2, n2) = (l * l, m * m, n * n);
    match (p, d) {
        (0, 0) => (SQRT3 * l2 * m, m * (1.0 - 2.0 * l2)),
        (0, 1) => (SQRT3 * l * m * n, -2.0 * l * m * n),
        (0, 2) => (SQRT3 * l2 * n, n * (1.0 - 2.0 * l2)),
        (0, 3) => (0.5 * SQRT3 * l * (l2 - m2), l * (1.0 - l2 + m2)),
        (0, 4) => (l * (n2 - 0.5 * (l2 + m2)), -SQRT3 * l * n2),
        (1, 0) => (SQRT3 * m2 * l, l * (1.0 - 2.0 * m2)),
        (1, 1) => (SQRT3 * m2 * n, n * (1.0 - 2.0 * m2)),
        (1, 2) => (SQRT3 * l * m * n, -2.0 * l * m * n),
        (1, 3) => (0.5 * SQRT3 * m * (l2 - m2), -m * (1.0 + l2 - m2)),
        (1, 4) => (m * (n2 - 0.5 * (l2 + m2)), -SQRT3 * m * n2),
        (2, 0) => (SQRT3 * l * m * n, -2.0 * l * m * n),
        (2, 1) => (SQRT3 * n2 * m, m * (1.0 - 2.0 * n2)),
        (2, 2) => (SQRT3 * n2 * l, l * (1.0 - 2.0 * n2)),
        (2, 3) => (0.5 * SQRT3 * n * (l2 - m2), -n * (l2 - m2)),
        _ => (n * (n2 - 0.5 * (l2 + m2)), SQRT3 * n * (l2 + m2)),
    }
}

/// (σ, π, δ) coefficients of ⟨d_i|H|d_j⟩ for i ≤ j.
fn d_d(i: usize, j: usize, [l, m, n]: [f64; 3]) -> (f64, f64, f64) {
    let (l2, m2, n2) = (l * l, m * m, n * n);
    let lm = l2 - m2;
    let z = n2 - 0.5 * (l2 + m2);
    match (i, j) {
        (0, 0) => (3.0 * l2 * m2, l2 + m2 - 4.0 * l2 * m2, n2 + l2 * m2),
        (1, 1) => (3.0 * m2 * n2, m2 + n2 - 4.0 * m2 * n2, l2 + m2 * n2),
        (2, 2) => (3.0 * n2 * l2, n2 + l2 - 4.0 * n2 * l2, m2 + n2 * l2),
        (0, 1) => (3.0 * l * m2 * n, l * n * (1.0 - 4.0 * m2), l * n * (m2 - 1.0)),
        (0, 2) => (3.0 * l2 * m * n, m * n * (1.0 - 4.0 * l2), m * n * (l2 - 1.0)),
        (1, 2) => (3.0 * l * m * n2, l * m * (1.0 - 4.0 * n2), l * m * (n2 - 1.0)),
        (0, 3) => (1.5 * l * m * lm, -2.0 * l * m * lm, 0.5 * l * m * lm),
        (1, 3) => (1.5 * m * n * lm, -m * n * (1.0 + 2.0 * lm), m * n * (1.0 + 0.5 * lm)),
        (2, 3) => (1.5 * n * l * lm, n * l * (1.0 - 2.0 * lm), -n * l * (1.0 - 0.5 * lm)),
        (0, 4) => (SQRT3 * l * m * z, -2.0 * SQRT3 * l * m * n2, 0.5 * SQRT3 * l * m * (1.0 + n2)),
        (1, 4) => (SQRT3 * m * n * z, SQRT3 * m * n * (l2 + m2 - n2), -0.5 * SQRT3 * m * n * (l2 + m2)),
        (2, 4) => (SQRT3 * l * n * z, SQRT3 * l * n * (l2 + m2 - n2), -0.5 * SQRT3 * l * n * (l2 + m2)),
        (3, 3) => (0.75 * lm * lm, l2 + m2 - lm * lm, n2 + 0.25 * lm * lm),
        (3, 4) => (0.5 * SQRT3 * lm * z, SQRT3 * n2 * (m2 - l2), 0.25 * SQRT3 * (1.0 + n2) * lm),
        _ => (z * z, 3.0 * n2 * (l2 + m2), 0.75 * (l2 + m2) * (l2 + m2)),
    }
}
