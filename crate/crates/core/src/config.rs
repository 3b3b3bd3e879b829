//! Square potential definition and the vector/scalar coupling taxonomy.
//!
//! Units throughout the crate: hbar = c = m = 1. Energies and potentials are
//! measured in mc^2, lengths in Compton wavelengths.

use serde::Serialize;

use crate::error::{KgError, Result};

/// Half-width of the band around `g_t = 1/2` that is classified as [`SolutionClass::B`].
pub const CLASS_EPSILON: f64 = 1e-12;

/// A square potential of strength `v0` on `|x| < a`, split into a vector
/// (time-component) part `g_t * v0` and a scalar part `g_s * v0`.
///
/// The scalar fraction is never stored: `g_s = 1 - g_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialConfig {
    v0: f64,
    half_width: f64,
    g_t: f64,
}

impl PotentialConfig {
    pub fn new(v0: f64, half_width: f64, g_t: f64) -> Result<Self> {
        if !v0.is_finite() {
            return Err(KgError::Domain(format!("v0 must be finite, got {v0}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(KgError::Domain(format!(
                "half-width must be positive and finite, got {half_width}"
            )));
        }
        check_coupling(g_t)?;
        Ok(Self { v0, half_width, g_t })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn g_t(&self) -> f64 {
        self.g_t
    }

    pub fn g_s(&self) -> f64 {
        1.0 - self.g_t
    }

    /// Vector part of the potential inside the well/barrier.
    pub fn vector_potential(&self) -> f64 {
        self.g_t * self.v0
    }

    /// Scalar part of the potential inside the well/barrier.
    pub fn scalar_potential(&self) -> f64 {
        self.g_s() * self.v0
    }

    pub fn class(&self) -> SolutionClass {
        classify_unchecked(self.g_t)
    }

    /// Same geometry and coupling with a different strength.
    pub fn with_v0(&self, v0: f64) -> Result<Self> {
        Self::new(v0, self.half_width, self.g_t)
    }
}

pub(crate) fn check_coupling(g_t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&g_t) {
        Ok(())
    } else {
        Err(KgError::Domain(format!("g_t must lie in [0, 1], got {g_t}")))
    }
}

/// Scattering/binding phenomenology selected by the vector fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolutionClass {
    /// Vector coupling dominates (`g_t > 1/2`).
    A,
    /// Equal mix (`g_t = 1/2`).
    B,
    /// Scalar coupling dominates (`g_t < 1/2`).
    C,
}

impl SolutionClass {
    pub fn label(&self) -> &'static str {
        match self {
            SolutionClass::A => "A",
            SolutionClass::B => "B",
            SolutionClass::C => "C",
        }
    }
}

impl std::fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(g_t: f64) -> Result<SolutionClass> {
    check_coupling(g_t)?;
    Ok(classify_unchecked(g_t))
}

fn classify_unchecked(g_t: f64) -> SolutionClass {
    if g_t > 0.5 + CLASS_EPSILON {
        SolutionClass::A
    } else if g_t < 0.5 - CLASS_EPSILON {
        SolutionClass::C
    } else {
        SolutionClass::B
    }
}

/// True when `g_t` sits on the class-B boundary, where `2 g_t - 1` must be
/// treated as zero.
pub(crate) fn is_balanced(g_t: f64) -> bool {
    (g_t - 0.5).abs() <= CLASS_EPSILON
}
