use serde::{Deserialize, Serialize};

/// Real atomic orbitals in the fixed ordering used for every Hamiltonian block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orbital {
    S,
    Px,
    Py,
    Pz,
    Dxy,
    Dyz,
    Dzx,
    Dx2y2,
    Dz2,
    SStar,
}

impl Orbital {
    pub const ALL: [Orbital; 10] = [
        Orbital::S,
        Orbital::Px,
        Orbital::Py,
        Orbital::Pz,
        Orbital::Dxy,
        Orbital::Dyz,
        Orbital::Dzx,
        Orbital::Dx2y2,
        Orbital::Dz2,
        Orbital::SStar,
    ];

    pub fn l(self) -> u32 {
        match self {
            Orbital::S | Orbital::SStar => 0,
            Orbital::Px | Orbital::Py | Orbital::Pz => 1,
            _ => 2,
        }
    }

    /// Cartesian index of a p orbital.
    pub fn p_axis(self) -> Option<usize> {
        match self {
            Orbital::Px => Some(0),
            Orbital::Py => Some(1),
            Orbital::Pz => Some(2),
            _ => None,
        }
    }

    /// Index within the d shell (xy, yz, zx, x²−y², z²).
    pub fn d_index(self) -> Option<usize> {
        match self {
            Orbital::Dxy => Some(0),
            Orbital::Dyz => Some(1),
            Orbital::Dzx => Some(2),
            Orbital::Dx2y2 => Some(3),
            Orbital::Dz2 => Some(4),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orbital::S => "s",
            Orbital::Px => "px",
            Orbital::Py => "py",
            Orbital::Pz => "pz",
            Orbital::Dxy => "dxy",
            Orbital::Dyz => "dyz",
            Orbital::Dzx => "dzx",
            Orbital::Dx2y2 => "dx2-y2",
            Orbital::Dz2 => "dz2",
            Orbital::SStar => "s*",
        }
    }
}

/// Orbital set carried by every atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "sp3")]
    Sp3,
    #[serde(rename = "sp3d5s*")]
    Sp3d5s,
}

impl Basis {
    pub fn orbitals(self) -> &'static [Orbital] {
        match self {
            Basis::Sp3 => &Orbital::ALL[..4],
            Basis::Sp3d5s => &Orbital::ALL[..],
        }
    }

    pub fn orbitals_per_atom(self) -> usize {
        self.orbitals().len()
    }

    pub fn label(self) -> &'static str {
        match self {
            Basis::Sp3 => "sp3",
            Basis::Sp3d5s => "sp3d5s*",
        }
    }
}
