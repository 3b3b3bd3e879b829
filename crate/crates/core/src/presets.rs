//! Named parameter sets for the standard transmission and spectrum plots.

use serde::Serialize;

use crate::error::{KgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PresetSpec {
    /// `T` against `V0` at fixed energy.
    Transmission {
        energy: f64,
        g_t: f64,
        half_width: f64,
        v0_min: f64,
        v0_max: f64,
        steps: usize,
    },
    /// Both sides of the rescaled quantization condition against `z`.
    Quantization { z0: f64, steps: usize },
    /// Bound-state levels against `V0`.
    Spectrum {
        g_t: f64,
        half_width: f64,
        v0_min: f64,
        v0_max: f64,
        steps: usize,
    },
}

const SWEEP_ENERGY: f64 = 1.1;

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| KgError::Domain(format!("unknown preset '{name}' (expected fig1 .. fig9)")))
    }

    pub fn spec(&self) -> PresetSpec {
        let transmission = |g_t, half_width, v0_min, v0_max| PresetSpec::Transmission {
            energy: SWEEP_ENERGY,
            g_t,
            half_width,
            v0_min,
            v0_max,
            steps: 1000,
        };
        let spectrum = |g_t, half_width, v0_min, v0_max| PresetSpec::Spectrum {
            g_t,
            half_width,
            v0_min,
            v0_max,
            steps: 800,
        };
        match self {
            Preset::Fig1 => transmission(1.0, 1.0, 0.0, 10.0),
            Preset::Fig2 => transmission(0.5, 1.0, 0.0, 10.0),
            Preset::Fig3 => transmission(0.25, 3.0, -10.0, 2.0),
            Preset::Fig4 => PresetSpec::Quantization { z0: 8.0, steps: 1000 },
            Preset::Fig5 => spectrum(1.0, 0.5, -4.0, -0.01),
            Preset::Fig6 => spectrum(0.75, 0.5, -6.0, -0.01),
            Preset::Fig7 => spectrum(0.5, 5.0, -4.0, -0.01),
            Preset::Fig8 => spectrum(0.25, 5.0, -4.5, -0.01),
            Preset::Fig9 => spectrum(0.0, 5.0, -1.99, -0.01),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::parse(s)
    }
}

/// One row of the graphical solution: `z`, `sqrt((z0/z)^2 - 1)`, `tan z`, `-cot z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizationPoint {
    pub z: f64,
    pub lhs: f64,
    pub tan: f64,
    pub neg_cot: f64,
}

/// Samples `z` on `(0, z0]` in `steps` equal increments.
pub fn quantization_curves(z0: f64, steps: usize) -> Vec<QuantizationPoint> {
    (1..=steps)
        .map(|i| {
            let z = z0 * i as f64 / steps as f64;
            QuantizationPoint {
                z,
                lhs: ((z0 / z).powi(2) - 1.0).max(0.0).sqrt(),
                tan: z.tan(),
                neg_cot: -1.0 / z.tan(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::parse(p.name()).unwrap(), p);
        }
        assert!(Preset::parse("fig10").is_err());
    }

    #[test]
    fn preset_parameters() {
        assert!(matches!(
            Preset::Fig1.spec(),
            PresetSpec::Transmission { energy, g_t, half_width, .. } if energy == 1.1 && g_t == 1.0 && half_width == 1.0
        ));
        assert!(matches!(Preset::Fig3.spec(), PresetSpec::Transmission { half_width, .. } if half_width == 3.0));
        assert!(
            matches!(Preset::Fig5.spec(), PresetSpec::Spectrum { g_t, half_width, .. } if g_t == 1.0 && half_width == 0.5)
        );
        assert!(
            matches!(Preset::Fig9.spec(), PresetSpec::Spectrum { g_t, half_width, .. } if g_t == 0.0 && half_width == 5.0)
        );
    }

    #[test]
    fn quantization_curve_ends_at_z0() {
        let pts = quantization_curves(8.0, 100);
        assert_eq!(pts.len(), 100);
        assert_eq!(pts[99].z, 8.0);
        assert_eq!(pts[99].lhs, 0.0);
    }
}
