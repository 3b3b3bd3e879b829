//! Scattering of incident particles (`E > 1`) by the square potential.
//!
//! Two independent routes are implemented: complex amplitude ratios from
//! matching `phi` and `phi'` at `x = +-a`, and real closed forms for `R` and
//! `T`. [`amplitudes`] evaluates both and refuses to answer if they disagree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{is_balanced, PotentialConfig, SolutionClass};
use crate::error::{KgError, Result};
use crate::kinematics::{interior_q_squared, Kinematics};

/// Below this `|q a|` the `sin(2qa)/q` and `cos(2qa)` factors are evaluated
/// from their Taylor series in `(2qa)^2`.
pub const Q_LIMIT_EPSILON: f64 = 1e-6;

/// Maximum tolerated disagreement between the amplitude and closed-form routes.
pub const ROUTE_AGREEMENT: f64 = 1e-10;

/// Tolerance used when certifying `T = 1` at a resonance.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

const DENOMINATOR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChargeSign {
    Positive,
    Negative,
}

impl ChargeSign {
    /// Sign of the interior charge density `E - g_t V0`.
    pub fn interior(energy: f64, cfg: &PotentialConfig) -> Self {
        if energy < cfg.vector_potential() {
            ChargeSign::Negative
        } else {
            ChargeSign::Positive
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ChargeSign::Positive => "positive",
            ChargeSign::Negative => "negative",
        }
    }
}

/// Physical reading of the interior solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    PropagatingParticle,
    Evanescent,
    PropagatingAntiparticle,
}

impl Regime {
    pub fn of(energy: f64, cfg: &PotentialConfig) -> Self {
        if interior_q_squared(energy, cfg) <= 0.0 {
            Regime::Evanescent
        } else if energy < cfg.vector_potential() {
            Regime::PropagatingAntiparticle
        } else {
            Regime::PropagatingParticle
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::PropagatingParticle => "propagating-particle",
            Regime::Evanescent => "evanescent",
            Regime::PropagatingAntiparticle => "propagating-antiparticle",
        }
    }
}

/// Amplitude ratios relative to the incident amplitude `A+`, plus `R` and `T`.
///
/// At exactly `q = 0` the interior plane-wave basis degenerates and the
/// interior ratios are not finite; the exterior ratios stay well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringSolution {
    pub kinematics: Kinematics,
    pub half_width: f64,
    pub ratio_a_minus: Complex64,
    pub ratio_b_plus: Complex64,
    pub ratio_b_minus: Complex64,
    pub ratio_c_plus: Complex64,
    pub reflection: f64,
    pub transmission: f64,
    pub interior_propagating: bool,
    pub interior_charge_sign: ChargeSign,
}

impl ScatteringSolution {
    fn k(&self) -> f64 {
        self.kinematics.k.magnitude
    }

    fn q(&self) -> Complex64 {
        self.kinematics.q.to_complex()
    }

    /// `(phi, phi')` of the left exterior solution at `x`.
    pub fn wave_left(&self, x: f64) -> (Complex64, Complex64) {
        let ik = Complex64::new(0.0, self.k());
        let fwd = (ik * x).exp();
        let bwd = (-ik * x).exp();
        (fwd + self.ratio_a_minus * bwd, ik * (fwd - self.ratio_a_minus * bwd))
    }

    /// `(phi, phi')` of the interior solution at `x`.
    pub fn wave_interior(&self, x: f64) -> (Complex64, Complex64) {
        let iq = Complex64::i() * self.q();
        let fwd = self.ratio_b_plus * (iq * x).exp();
        let bwd = self.ratio_b_minus * (-iq * x).exp();
        (fwd + bwd, iq * (fwd - bwd))
    }

    /// `(phi, phi')` of the right exterior solution at `x`.
    pub fn wave_right(&self, x: f64) -> (Complex64, Complex64) {
        let ik = Complex64::new(0.0, self.k());
        let wave = self.ratio_c_plus * (ik * x).exp();
        (wave, ik * wave)
    }

    /// Piecewise wavefunction for unit incident amplitude.
    pub fn wavefunction(&self, x: f64) -> (Complex64, Complex64) {
        if x < -self.half_width {
            self.wave_left(x)
        } else if x > self.half_width {
            self.wave_right(x)
        } else {
            self.wave_interior(x)
        }
    }

    /// Net current on the incident side, `k (1 - |A-/A+|^2)`.
    pub fn incident_side_current(&self) -> f64 {
        self.k() * (1.0 - self.ratio_a_minus.norm_sqr())
    }

    pub fn transmitted_current(&self) -> f64 {
        self.k() * self.ratio_c_plus.norm_sqr()
    }

    /// Interior current: `q (|B+|^2 - |B-|^2)` for real `q`, and
    /// `i|q| (B+ B-* - B+* B-)` for `q = i|q|`.
    pub fn interior_current(&self) -> f64 {
        let q = self.kinematics.q;
        if q.imaginary {
            let cross = self.ratio_b_plus * self.ratio_b_minus.conj();
            -2.0 * q.magnitude * cross.im
        } else {
            q.magnitude * (self.ratio_b_plus.norm_sqr() - self.ratio_b_minus.norm_sqr())
        }
    }
}

fn require_incident(energy: f64) -> Result<()> {
    if energy > 1.0 {
        Ok(())
    } else {
        Err(KgError::Domain(format!(
            "no incident propagating wave at E = {energy} (need E > 1)"
        )))
    }
}

/// `cos(2qa)` and `sin(2qa)/q` as real functions of the signed `q^2`.
///
/// Both are even in `q`, so the real and imaginary branches share one
/// formula; `sin -> sinh`, `cos -> cosh` when `q^2 < 0`.
pub(crate) fn interior_trig(q_squared: f64, a: f64) -> (f64, f64) {
    let qa_sq = q_squared * a * a;
    if qa_sq.abs() < Q_LIMIT_EPSILON * Q_LIMIT_EPSILON {
        let u = 4.0 * qa_sq;
        let cos = 1.0 - u / 2.0 + u * u / 24.0;
        let sinc = 2.0 * a * (1.0 - u / 6.0 + u * u / 120.0);
        (cos, sinc)
    } else if q_squared > 0.0 {
        let q = q_squared.sqrt();
        ((2.0 * q * a).cos(), (2.0 * q * a).sin() / q)
    } else {
        let m = (-q_squared).sqrt();
        ((2.0 * m * a).cosh(), (2.0 * m * a).sinh() / m)
    }
}

/// `cos(2qa)` and `sin(2qa)/q` for complex `q`, both divided by a common
/// positive scale to keep the evanescent branch finite. Returns the scale's
/// reciprocal as the third element.
fn complex_interior_trig(q: Complex64, q_squared: f64, a: f64) -> (Complex64, Complex64, f64) {
    let qa = q * a;
    if qa.norm() < Q_LIMIT_EPSILON {
        let u = 4.0 * q_squared * a * a;
        let cos = 1.0 - u / 2.0 + u * u / 24.0;
        let sinc = 2.0 * a * (1.0 - u / 6.0 + u * u / 120.0);
        return (Complex64::from(cos), Complex64::from(sinc), 1.0);
    }
    let two_qa = 2.0 * qa;
    let inv_scale = 1.0 / (2.0 * qa.im).abs().cosh();
    if inv_scale == 0.0 {
        // cosh overflowed: cos(2qa)/cosh -> 1, sin(2qa)/(q cosh) -> 1/|q| along q = i|q|
        return (Complex64::from(1.0), Complex64::from(1.0 / q.norm()), 0.0);
    }
    (two_qa.cos() * inv_scale, two_qa.sin() / q * inv_scale, inv_scale)
}

/// Amplitude ratios from the matching conditions, checked against the
/// closed-form coefficients.
pub fn amplitudes(energy: f64, cfg: &PotentialConfig) -> Result<ScatteringSolution> {
    require_incident(energy)?;
    let kin = Kinematics::new(energy, cfg);
    let k = kin.k.magnitude;
    let q = kin.q.to_complex();
    let q_sq = kin.q_squared;
    let a = cfg.half_width();
    let i = Complex64::i();

    let (cos2, sinc2, inv_scale) = complex_interior_trig(q, q_sq, a);
    // the common denominator 2kq cos(2qa) - i(q^2 + k^2) sin(2qa), divided by q
    let denom = 2.0 * k * cos2 - i * (q_sq + kin.k_squared) * sinc2;
    if !(denom.norm() >= DENOMINATOR_FLOOR) {
        log::warn!("vanishing scattering denominator at E = {energy}, cfg = {cfg:?}");
        return Err(KgError::Numerical(format!(
            "scattering denominator vanished at E = {energy}, V0 = {}, a = {}, g_t = {}",
            cfg.v0(),
            a,
            cfg.g_t()
        )));
    }

    let phase = (-2.0 * i * k * a).exp();
    let ratio_a_minus = i * (q_sq - kin.k_squared) * sinc2 * phase / denom;
    let ratio_c_plus = 2.0 * k * inv_scale * phase / denom;
    let ratio_b_plus = k * (q + k) * (-i * (q + k) * a).exp() * inv_scale / (q * denom);
    let ratio_b_minus = k * (q - k) * (i * (q - k) * a).exp() * inv_scale / (q * denom);

    let (reflection, transmission) = coefficients(energy, cfg)?;
    let r_amp = ratio_a_minus.norm_sqr();
    let t_amp = ratio_c_plus.norm_sqr();
    if !((r_amp - reflection).abs() <= ROUTE_AGREEMENT && (t_amp - transmission).abs() <= ROUTE_AGREEMENT) {
        log::warn!(
            "amplitude/closed-form mismatch at E = {energy}, cfg = {cfg:?}: R {r_amp} vs {reflection}, T {t_amp} vs {transmission}"
        );
        return Err(KgError::Numerical(format!(
            "amplitude and closed-form routes disagree at E = {energy}: R {r_amp:e} vs {reflection:e}, T {t_amp:e} vs {transmission:e}"
        )));
    }

    Ok(ScatteringSolution {
        kinematics: kin,
        half_width: a,
        ratio_a_minus,
        ratio_b_plus,
        ratio_b_minus,
        ratio_c_plus,
        reflection,
        transmission,
        interior_propagating: q_sq > 0.0,
        interior_charge_sign: ChargeSign::interior(energy, cfg),
    })
}

/// Closed-form `(R, T)`.
///
/// `T = [1 + X^2]^-1` with `X = (k^2 - q^2) sin(2qa) / (2qk)`, which is real
/// on both sides of `q^2 = 0`. `R` is evaluated independently from its own
/// closed form, compared with `1 - T`, and then returned as `1 - T`.
pub fn coefficients(energy: f64, cfg: &PotentialConfig) -> Result<(f64, f64)> {
    require_incident(energy)?;
    let k_sq = energy * energy - 1.0;
    let k = k_sq.sqrt();
    let q_sq = interior_q_squared(energy, cfg);
    let (_, sinc2) = interior_trig(q_sq, cfg.half_width());

    let x = (k_sq - q_sq) * sinc2 / (2.0 * k);
    let transmission = 1.0 / (1.0 + x * x);
    let y = 1.0 / x;
    let reflection = 1.0 / (1.0 + y * y);

    if !(transmission.is_finite() && (reflection + transmission - 1.0).abs() <= 1e-12) {
        return Err(KgError::Numerical(format!(
            "closed-form R + T = {} at E = {energy}, cfg = {cfg:?}",
            reflection + transmission
        )));
    }
    Ok((1.0 - transmission, transmission))
}

pub fn transmission(energy: f64, cfg: &PotentialConfig) -> Result<f64> {
    coefficients(energy, cfg).map(|(_, t)| t)
}

/// A transmission resonance: the `n`-th standing wave `2qa = n pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub n: u32,
    /// Energy (for [`resonance_energies`]) or potential strength (for
    /// [`resonant_v0_for_energy`]).
    pub value: f64,
    pub transmission: f64,
}

impl Resonance {
    pub fn verified(&self) -> bool {
        (self.transmission - 1.0).abs() <= RESONANCE_TOLERANCE
    }
}

fn standing_wave_q(n: u32, a: f64) -> f64 {
    n as f64 * PI / (2.0 * a)
}

/// Resonance energies `E_n = g_t V0 +- sqrt((n pi / 2a)^2 + (1 + g_s V0)^2)`
/// for `n = 1..=n_max`, keeping only incident energies `E_n > 1`.
pub fn resonance_energies(cfg: &PotentialConfig, n_max: u32) -> Result<Vec<Resonance>> {
    if n_max < 1 {
        return Err(KgError::Domain("n_max must be at least 1".into()));
    }
    let mass = 1.0 + cfg.scalar_potential();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let q = standing_wave_q(n, cfg.half_width());
        let radical = (q * q + mass * mass).sqrt();
        for energy in [cfg.vector_potential() - radical, cfg.vector_potential() + radical] {
            if energy > 1.0 {
                out.push(Resonance {
                    n,
                    value: energy,
                    transmission: transmission(energy, cfg)?,
                });
            }
        }
    }
    Ok(out)
}

/// Potential strengths giving `T(E) = 1` through the `n`-th standing wave.
///
/// Solves `(2g_t - 1) V0^2 - 2 V0 [(E - 1) g_t + 1] + (E^2 - 1) - (n pi / 2a)^2 = 0`,
/// which degenerates to a linear equation for `g_t = 1/2`.
pub fn resonant_v0_for_energy(energy: f64, g_t: f64, half_width: f64, n: u32) -> Result<Vec<Resonance>> {
    require_incident(energy)?;
    if n < 1 {
        return Err(KgError::Domain("resonance index must be at least 1".into()));
    }
    // validates g_t and a
    let base = PotentialConfig::new(0.0, half_width, g_t)?;
    let q = standing_wave_q(n, half_width);
    let quad = if is_balanced(g_t) { 0.0 } else { 2.0 * g_t - 1.0 };
    let half_lin = (energy - 1.0) * g_t + 1.0;
    let constant = energy * energy - 1.0 - q * q;

    let roots: Vec<f64> = if quad == 0.0 {
        vec![constant / (2.0 * half_lin)]
    } else {
        // quad V^2 - 2 half_lin V + constant = 0
        let disc = half_lin * half_lin - quad * constant;
        if disc < 0.0 {
            Vec::new()
        } else {
            let s = disc.sqrt();
            let big = half_lin + half_lin.signum() * s;
            let mut r = if big == 0.0 {
                vec![0.0]
            } else {
                vec![big / quad, constant / big]
            };
            r.sort_by(f64::total_cmp);
            r.dedup();
            r
        }
    };

    roots
        .into_iter()
        .map(|v0| {
            let cfg = base.with_v0(v0)?;
            Ok(Resonance {
                n,
                value: v0,
                transmission: transmission(energy, &cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionRecord {
    pub v0: f64,
    pub q_squared: f64,
    pub transmission: f64,
    pub reflection: f64,
    pub charge_sign: ChargeSign,
    pub regime: Regime,
    pub class: SolutionClass,
}

/// `T` and `R` against potential strength at fixed energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionSweep {
    pub energy: f64,
    pub g_t: f64,
    pub half_width: f64,
    pub records: Vec<TransmissionRecord>,
}

pub(crate) fn check_monotone(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(KgError::Domain("empty V0 grid".into()));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(KgError::Domain("V0 grid contains non-finite values".into()));
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if increasing || decreasing {
        Ok(())
    } else {
        Err(KgError::Domain("V0 grid must be strictly monotone".into()))
    }
}

/// `n + 1` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| {
            if i == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / steps as f64
            }
        })
        .collect()
}

pub fn sweep_transmission(energy: f64, g_t: f64, half_width: f64, v0_grid: &[f64]) -> Result<TransmissionSweep> {
    require_incident(energy)?;
    check_monotone(v0_grid)?;
    let base = PotentialConfig::new(0.0, half_width, g_t)?;
    let records = v0_grid
        .par_iter()
        .map(|&v0| {
            let cfg = base.with_v0(v0)?;
            let (reflection, transmission) = coefficients(energy, &cfg)?;
            Ok(TransmissionRecord {
                v0,
                q_squared: interior_q_squared(energy, &cfg),
                transmission,
                reflection,
                charge_sign: ChargeSign::interior(energy, &cfg),
                regime: Regime::of(energy, &cfg),
                class: cfg.class(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionSweep {
        energy,
        g_t,
        half_width,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_transmission, OracleConfig};
    use proptest::prelude::*;

    fn cfg(v0: f64, a: f64, g_t: f64) -> PotentialConfig {
        PotentialConfig::new(v0, a, g_t).unwrap()
    }

    #[test]
    fn free_propagation() {
        let c = cfg(0.0, 1.0, 0.4);
        assert_eq!(coefficients(1.25, &c).unwrap(), (0.0, 1.0));
        let sol = amplitudes(1.25, &c).unwrap();
        assert!(sol.ratio_a_minus.norm() < 1e-15);
        assert!((sol.ratio_c_plus.norm() - 1.0).abs() < 1e-15);
        assert_eq!(sol.interior_charge_sign, ChargeSign::Positive);
    }

    #[test]
    fn standing_wave_is_reflectionless() {
        // q = pi/2 at a = 1 via (1.1 - V0)^2 - 1 = pi^2/4
        let v0 = 1.1 + (1.0 + PI * PI / 4.0).sqrt();
        let sol = amplitudes(1.1, &cfg(v0, 1.0, 1.0)).unwrap();
        assert!((sol.kinematics.q.magnitude - PI / 2.0).abs() < 1e-14);
        assert!(sol.ratio_a_minus.norm() < 1e-12);
        assert!((sol.transmission - 1.0).abs() < 1e-12);
        assert_eq!(sol.interior_charge_sign, ChargeSign::Negative);
    }

    #[test]
    fn class_a_barrier_matches_oracle() {
        let c = cfg(3.0, 1.0, 1.0);
        let sol = amplitudes(1.1, &c).unwrap();
        assert!(sol.interior_propagating);
        assert!((sol.kinematics.q_squared - 2.61).abs() < 1e-14);
        let (_, t_oracle) = oracle_transmission(1.1, &c, &OracleConfig::default()).unwrap();
        assert!((sol.transmission - t_oracle).abs() < 1e-6);
        // frozen from the integrator run, not from the closed form
        assert!((t_oracle - 0.979_439_820_1).abs() < 1e-9, "oracle T = {t_oracle}");
    }

    #[test]
    fn class_b_evanescent_matches_oracle() {
        let c = cfg(2.0, 1.0, 0.5);
        let kin = Kinematics::new(1.1, &c);
        assert!((kin.q_squared + 3.99).abs() < 1e-14);
        let (r, t) = coefficients(1.1, &c).unwrap();
        let k = 0.21f64.sqrt();
        let m = 3.99f64.sqrt();
        let x = (0.21 + 3.99) / (2.0 * m * k) * (2.0 * m).sinh();
        assert!((t - 1.0 / (1.0 + x * x)).abs() < 1e-15);
        let (r_o, t_o) = oracle_transmission(1.1, &c, &OracleConfig::default()).unwrap();
        assert!((t - t_o).abs() < 1e-6);
        assert!((r - r_o).abs() < 1e-6);
    }

    #[test]
    fn continuous_across_second_critical_potential() {
        let v2 = 2.1;
        let t = |v0: f64| transmission(1.1, &cfg(v0, 1.0, 1.0)).unwrap();
        // a jump J survives in the difference below as J/2; smooth slope cancels to O(h^3)
        let h = 1e-6;
        let jump = (t(v2 + h) - t(v2 - h)) - 0.5 * (t(v2 + 2.0 * h) - t(v2 - 2.0 * h));
        assert!(jump.abs() < 1e-6, "jump = {jump:e}");
        let h = 1e-9;
        assert!((t(v2 + h) - t(v2 - h)).abs() < 1e-8);
        // q = 0 exactly: T = 1 / (1 + (k a)^2)
        let at = t(v2);
        assert!((at - 1.0 / (1.0 + 0.21)).abs() < 1e-12);
        let sol = amplitudes(1.1, &cfg(v2 + 1e-9, 1.0, 1.0)).unwrap();
        assert!((sol.transmission - at).abs() < 1e-8);
    }

    #[test]
    fn wavefunction_is_smooth_at_interfaces() {
        for &(e, v0, a, g) in &[
            (1.1, 3.0, 1.0, 1.0),
            (1.1, 2.0, 1.0, 0.5),
            (2.5, -4.0, 0.7, 0.25),
            (1.4, 0.3, 2.0, 0.9),
        ] {
            let sol = amplitudes(e, &cfg(v0, a, g)).unwrap();
            for (outer, inner) in [
                (sol.wave_left(-a), sol.wave_interior(-a)),
                (sol.wave_right(a), sol.wave_interior(a)),
            ] {
                assert!((outer.0 - inner.0).norm() < 1e-12, "phi jump at ({e}, {v0}, {a}, {g})");
                assert!((outer.1 - inner.1).norm() < 1e-12, "phi' jump at ({e}, {v0}, {a}, {g})");
            }
        }
    }

    #[test]
    fn sub_threshold_energy_is_a_domain_error() {
        let c = cfg(1.0, 1.0, 1.0);
        assert!(amplitudes(1.0, &c).unwrap_err().is_domain());
        assert!(coefficients(0.9, &c).unwrap_err().is_domain());
        assert!(sweep_transmission(0.5, 1.0, 1.0, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn opaque_barrier_stays_finite() {
        let c = cfg(500.0, 3.0, 0.5);
        let sol = amplitudes(1.1, &c).unwrap();
        assert!(sol.transmission < 1e-150);
        assert_eq!(sol.reflection, 1.0);
        assert!(sol.ratio_c_plus.is_finite() && sol.ratio_b_plus.is_finite());
        assert!((sol.ratio_a_minus.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resonance_energy_examples() {
        let res = resonance_energies(&cfg(3.0, 1.0, 1.0), 1).unwrap();
        let expected = 3.0 - (PI * PI / 4.0 + 1.0).sqrt();
        assert!((res[0].value - expected).abs() < 1e-15);
        assert!((res[0].value - 1.13787).abs() < 1e-4);
        assert!(res.iter().all(Resonance::verified));
        // both signs of the radical can exceed the threshold for a high barrier
        assert_eq!(res.len(), 2);

        let res = resonance_energies(&cfg(0.05, 1.0, 1.0), 1).unwrap();
        assert_eq!(res.len(), 1);
        assert!((res[0].value - (0.05 + (PI * PI / 4.0 + 1.0).sqrt())).abs() < 1e-15);
        assert!(res[0].verified());

        for v0 in [-3.0, -0.5, 0.0, 0.7, 4.0] {
            for g in [0.0, 0.25, 0.5, 1.0] {
                let res = resonance_energies(&cfg(v0, 0.8, g), 5).unwrap();
                assert!(res.iter().all(|r| r.value > 1.0 && r.verified()));
            }
        }
        assert!(resonance_energies(&cfg(1.0, 1.0, 1.0), 0).is_err());
    }

    #[test]
    fn resonant_depth_examples() {
        let roots = resonant_v0_for_energy(1.1, 1.0, 1.0, 1).unwrap();
        assert_eq!(roots.len(), 2);
        let s = (1.21 - 0.21 + PI * PI / 4.0f64).sqrt();
        assert!((roots[1].value - (1.1 + s)).abs() < 1e-12);
        assert!((roots[1].value - 2.962_096).abs() < 1e-6);
        assert!((roots[0].value - (1.1 - s)).abs() < 1e-12);
        assert!(roots.iter().all(Resonance::verified));

        let roots = resonant_v0_for_energy(1.1, 0.5, 1.0, 1).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].verified());

        assert!(resonant_v0_for_energy(1.1, 0.25, 1.0, 0).is_err());
    }

    #[test]
    fn sweep_preserves_grid_order() {
        let grid = linear_grid(10.0, -10.0, 200);
        let sweep = sweep_transmission(1.1, 0.25, 3.0, &grid).unwrap();
        assert_eq!(sweep.records.len(), 201);
        for (rec, v) in sweep.records.iter().zip(&grid) {
            assert_eq!(rec.v0, *v);
        }
        assert!(sweep_transmission(1.1, 0.25, 3.0, &[0.0, 1.0, 0.5]).is_err());
        assert!(sweep_transmission(1.1, 0.25, 3.0, &[]).is_err());
    }

    #[test]
    fn regime_labels() {
        assert_eq!(Regime::of(1.1, &cfg(0.05, 1.0, 1.0)), Regime::PropagatingParticle);
        assert_eq!(Regime::of(1.1, &cfg(1.0, 1.0, 1.0)), Regime::Evanescent);
        assert_eq!(Regime::of(1.1, &cfg(3.0, 1.0, 1.0)), Regime::PropagatingAntiparticle);
    }

    #[test]
    fn linear_grid_endpoints_are_exact() {
        let g = linear_grid(-4.0, -0.01, 800);
        assert_eq!(g.len(), 801);
        assert_eq!(g[0], -4.0);
        assert_eq!(g[800], -0.01);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn charge_is_conserved(
            e in 1.0001f64..3.0,
            v0 in -5.0f64..5.0,
            a in 0.2f64..3.0,
            g in 0.0f64..=1.0,
        ) {
            let c = cfg(v0, a, g);
            let (r, t) = coefficients(e, &c).unwrap();
            prop_assert!((r + t - 1.0).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&t));
            let sol = amplitudes(e, &c).unwrap();
            prop_assert!((sol.ratio_a_minus.norm_sqr() - r).abs() <= 1e-12);
            prop_assert!((sol.ratio_c_plus.norm_sqr() - t).abs() <= 1e-12);
            prop_assert_eq!(
                sol.interior_charge_sign == ChargeSign::Negative,
                e < c.vector_potential()
            );
        }

        #[test]
        fn current_is_uniform(
            e in 1.0001f64..3.0,
            v0 in -5.0f64..5.0,
            a in 0.2f64..3.0,
            g in 0.0f64..=1.0,
        ) {
            let sol = amplitudes(e, &cfg(v0, a, g)).unwrap();
            let j_out = sol.transmitted_current();
            prop_assert!((sol.incident_side_current() - j_out).abs() <= 1e-10);
            prop_assume!(sol.kinematics.q_squared.abs() * a * a > 1e-6);
            let j_in = sol.interior_current();
            let scale = (sol.kinematics.q.magnitude * sol.ratio_b_plus.norm_sqr()).max(1.0);
            prop_assert!((j_in - j_out).abs() <= 1e-10 * scale, "{} vs {}", j_in, j_out);
        }
    }
}
