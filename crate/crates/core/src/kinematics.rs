//! Wave numbers, critical potentials and plane-wave densities/currents.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{check_coupling, is_balanced, PotentialConfig};
use crate::error::{KgError, Result};

/// A wave number that is either real or purely imaginary.
///
/// Stored as a non-negative magnitude plus a flag; an imaginary wave number
/// `q = i|q|` corresponds to an evanescent (or, outside, bound) solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wavenumber {
    pub magnitude: f64,
    pub imaginary: bool,
}

impl Wavenumber {
    /// Branch-resolved square root of a signed squared wave number.
    pub fn from_squared(squared: f64) -> Self {
        if squared >= 0.0 {
            Self {
                magnitude: squared.sqrt(),
                imaginary: false,
            }
        } else {
            Self {
                magnitude: (-squared).sqrt(),
                imaginary: true,
            }
        }
    }

    pub fn is_real(&self) -> bool {
        !self.imaginary
    }

    pub fn squared(&self) -> f64 {
        if self.imaginary {
            -self.magnitude * self.magnitude
        } else {
            self.magnitude * self.magnitude
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.imaginary {
            Complex64::new(0.0, self.magnitude)
        } else {
            Complex64::new(self.magnitude, 0.0)
        }
    }
}

/// `k^2 = E^2 - 1` outside the potential.
pub fn exterior_k_squared(energy: f64) -> f64 {
    energy * energy - 1.0
}

/// `q^2 = (E - g_t V0)^2 - (1 + g_s V0)^2` inside the potential.
pub fn interior_q_squared(energy: f64, cfg: &PotentialConfig) -> f64 {
    let kinetic = energy - cfg.vector_potential();
    let mass = 1.0 + cfg.scalar_potential();
    kinetic * kinetic - mass * mass
}

pub fn exterior_wavenumber(energy: f64) -> Wavenumber {
    Wavenumber::from_squared(exterior_k_squared(energy))
}

pub fn interior_wavenumber(energy: f64, cfg: &PotentialConfig) -> Wavenumber {
    Wavenumber::from_squared(interior_q_squared(energy, cfg))
}

/// Exterior decay constant `kappa = sqrt(1 - E^2)`, defined for `|E| <= 1`.
pub fn kappa(energy: f64) -> Option<f64> {
    let kappa_sq = 1.0 - energy * energy;
    (kappa_sq >= 0.0).then(|| kappa_sq.sqrt())
}

/// Everything that depends only on `(E, cfg)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kinematics {
    pub energy: f64,
    pub k_squared: f64,
    pub q_squared: f64,
    pub k: Wavenumber,
    pub q: Wavenumber,
    pub kappa: Option<f64>,
}

impl Kinematics {
    pub fn new(energy: f64, cfg: &PotentialConfig) -> Self {
        let k_squared = exterior_k_squared(energy);
        let q_squared = interior_q_squared(energy, cfg);
        Self {
            energy,
            k_squared,
            q_squared,
            k: Wavenumber::from_squared(k_squared),
            q: Wavenumber::from_squared(q_squared),
            kappa: kappa(energy),
        }
    }
}

/// Potential strengths at which `q^2` changes sign for fixed `E`.
///
/// Returns `(V1, V2)` with `V1 = E - 1` and `V2 = (E + 1) / (2 g_t - 1)`;
/// `V2` is absent for the balanced coupling `g_t = 1/2`.
pub fn critical_potentials(energy: f64, g_t: f64) -> Result<(f64, Option<f64>)> {
    check_coupling(g_t)?;
    let v1 = energy - 1.0;
    let v2 = (!is_balanced(g_t)).then(|| (energy + 1.0) / (2.0 * g_t - 1.0));
    Ok((v1, v2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Exterior,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }
}

/// Charge density and current carried by one plane wave of unit amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelDensities {
    pub rho: f64,
    pub current: f64,
    pub group_velocity: f64,
}

pub fn channel_densities(
    energy: f64,
    cfg: &PotentialConfig,
    region: Region,
    direction: Direction,
) -> Result<ChannelDensities> {
    let (rho, wave_sq) = match region {
        Region::Exterior => (energy, exterior_k_squared(energy)),
        Region::Interior => (energy - cfg.vector_potential(), interior_q_squared(energy, cfg)),
    };
    if !(wave_sq > 0.0) {
        return Err(KgError::NoPropagatingChannel(format!(
            "{region:?} wave number squared is {wave_sq:e} at E = {energy}"
        )));
    }
    let current = direction.sign() * wave_sq.sqrt();
    Ok(ChannelDensities {
        rho,
        current,
        group_velocity: current / rho,
    })
}
