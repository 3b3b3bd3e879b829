//! Bound states from the parity quantization conditions.
//!
//! Matching `B cos(qx)` or `B sin(qx)` to `A e^{-kappa |x|}` at `x = a` gives
//! `kappa/q = tan(qa)` (even) and `kappa/q = -cot(qa)` (odd). Both are used in
//! the pole-free forms `kappa cos(qa) - q sin(qa)` and `kappa sin(qa) + q cos(qa)`,
//! which have the same zeros for `q > 0` and no singularities to trip the
//! bracketing.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::PotentialConfig;
use crate::error::{KgError, Result};
use crate::kinematics::interior_q_squared;

/// Uniform energy samples per configuration before adaptive refinement.
pub const SCAN_POINTS: usize = 8192;
/// Subdivision factor used around suspected near-tangent double roots.
pub const REFINE_FACTOR: usize = 8;
/// Scan window is `(-1 + E_MARGIN, 1 - E_MARGIN)`.
pub const E_MARGIN: f64 = 1e-9;
/// Maximum `|residual|` accepted for a reported level.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Maximum modulus of the continued transmission denominator at a level.
pub const POLE_TOLERANCE: f64 = 1e-8;

const MEDIAN_HALF_WINDOW: usize = 8;
const DIP_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub energy: f64,
    pub parity: Parity,
    /// 1-based position in the energy-ordered spectrum of the configuration.
    pub index: usize,
    /// `q a`
    pub z: f64,
    pub z0: f64,
    pub residual: f64,
    /// `|D|` of the transmission denominator continued to `k = i kappa`.
    pub pole_residual: f64,
}

fn residual_raw(energy: f64, q: f64, a: f64, parity: Parity) -> f64 {
    let kappa = (1.0 - energy * energy).max(0.0).sqrt();
    let (s, c) = (q * a).sin_cos();
    match parity {
        Parity::Even => kappa * c - q * s,
        Parity::Odd => kappa * s + q * c,
    }
}

/// Pole-free matching residual; zero exactly at a bound state of the given parity.
pub fn quantization_residual(energy: f64, cfg: &PotentialConfig, parity: Parity) -> Result<f64> {
    if !(energy.abs() < 1.0) {
        return Err(KgError::Domain(format!("bound states need |E| < 1, got {energy}")));
    }
    let q_sq = interior_q_squared(energy, cfg);
    if !(q_sq > 0.0) {
        return Err(KgError::NoInteriorMode { q_squared: q_sq });
    }
    Ok(residual_raw(energy, q_sq.sqrt(), cfg.half_width(), parity))
}

/// Matching residuals on the imaginary-`q` branch, `-kappa/|q| - tanh(|q|a)`
/// (even) and `-kappa/|q| - coth(|q|a)` (odd). Both are strictly negative, so
/// no bound state can have an evanescent interior.
pub fn imaginary_q_residual(energy: f64, cfg: &PotentialConfig, parity: Parity) -> Result<f64> {
    if !(energy.abs() < 1.0) {
        return Err(KgError::Domain(format!("bound states need |E| < 1, got {energy}")));
    }
    let q_sq = interior_q_squared(energy, cfg);
    if !(q_sq < 0.0) {
        return Err(KgError::Domain(format!("q^2 = {q_sq:e} is not negative")));
    }
    let m = (-q_sq).sqrt();
    let kappa = (1.0 - energy * energy).sqrt();
    let t = (m * cfg.half_width()).tanh();
    Ok(match parity {
        Parity::Even => -kappa / m - t,
        Parity::Odd => -kappa / m - 1.0 / t,
    })
}

/// `z0 = a sqrt((2g_t - 1) V0^2 - 2 V0 [(E - 1) g_t + 1])`.
pub fn z0_of(energy: f64, cfg: &PotentialConfig) -> Result<f64> {
    let v = cfg.v0();
    let g = cfg.g_t();
    let radicand = (2.0 * g - 1.0) * v * v - 2.0 * v * ((energy - 1.0) * g + 1.0);
    if radicand < 0.0 {
        return Err(KgError::NoRealZ0 { radicand });
    }
    Ok(cfg.half_width() * radicand.sqrt())
}

/// Modulus of the transmission-amplitude denominator
/// `2qk cos(2qa) - i(q^2 + k^2) sin(2qa)` continued to `k = i kappa`.
pub fn pole_denominator(energy: f64, cfg: &PotentialConfig) -> f64 {
    let q = Complex64::from(interior_q_squared(energy, cfg)).sqrt();
    let k = Complex64::new(0.0, (1.0 - energy * energy).max(0.0).sqrt());
    let two_qa = 2.0 * q * cfg.half_width();
    let d = 2.0 * q * k * two_qa.cos() - Complex64::i() * (q * q + k * k) * two_qa.sin();
    d.norm()
}

/// Energy windows inside `(-1 + E_MARGIN, 1 - E_MARGIN)` on which `q^2 > 0`,
/// as `(lo, hi)` pairs. `q^2 = 0` at `E = g_t V0 +- |1 + g_s V0|`.
pub fn propagating_windows(cfg: &PotentialConfig) -> Vec<(f64, f64)> {
    let lo = -1.0 + E_MARGIN;
    let hi = 1.0 - E_MARGIN;
    let centre = cfg.vector_potential();
    let half = (1.0 + cfg.scalar_potential()).abs();
    let (below, above) = (centre - half, centre + half);
    let mut windows = Vec::new();
    if below > lo {
        windows.push((lo, below.min(hi)));
    }
    if above < hi {
        windows.push((above.max(lo), hi));
    }
    windows.retain(|(l, h)| h > l);
    windows
}

/// Sample points over one window, nudging any `q^2 = 0` edge inward until
/// the interior mode is propagating.
fn window_samples(cfg: &PotentialConfig, lo: f64, hi: f64, total_width: f64) -> Vec<f64> {
    let n = ((SCAN_POINTS as f64 * (hi - lo) / total_width).ceil() as usize).max(16);
    let mut pts: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    for (idx, toward) in [(0usize, hi), (n - 1, lo)] {
        let mut e = pts[idx];
        let mut step = 1e-15f64.max(e.abs() * f64::EPSILON);
        while interior_q_squared(e, cfg) <= 0.0 && step < (hi - lo) * 1e-3 {
            e = pts[idx] + (toward - pts[idx]).signum() * step;
            step *= 2.0;
        }
        pts[idx] = e;
    }
    pts.retain(|&e| interior_q_squared(e, cfg) > 0.0);
    pts.dedup();
    pts
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

/// Minimise `sign * f` on `[lo, hi]` by golden-section search.
pub(crate) fn golden_minimum(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisect to the last representable bracket.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, 0.0);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    }
}

/// Sign-change brackets of `f` over `samples`, including pairs of roots
/// hiding inside a single cell where `|f|` dips without changing sign.
pub(crate) fn find_brackets(f: &impl Fn(f64) -> f64, samples: &[f64]) -> Vec<(f64, f64)> {
    let values: Vec<f64> = samples.iter().map(|&e| f(e)).collect();
    let n = values.len();
    let mut brackets = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            brackets.push((samples[i], samples[i]));
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            brackets.push((samples[i], samples[i + 1]));
        }
    }
    if n > 0 && values[n - 1] == 0.0 {
        brackets.push((samples[n - 1], samples[n - 1]));
    }

    for i in 1..n.saturating_sub(1) {
        let (fl, fc, fr) = (values[i - 1], values[i], values[i + 1]);
        let is_dip = fc.abs() < fl.abs() && fc.abs() < fr.abs();
        let same_sign = fl.signum() == fc.signum() && fc.signum() == fr.signum() && fc != 0.0;
        if !(is_dip && same_sign) {
            continue;
        }
        let lo_idx = i.saturating_sub(MEDIAN_HALF_WINDOW);
        let hi_idx = (i + MEDIAN_HALF_WINDOW + 1).min(n);
        let mut neighbourhood: Vec<f64> = values[lo_idx..hi_idx].iter().map(|v| v.abs()).collect();
        if fc.abs() >= DIP_RATIO * median(&mut neighbourhood) {
            continue;
        }
        brackets.extend(split_double_root(f, samples[i - 1], samples[i + 1], fc.signum()));
    }
    brackets.sort_by(|x, y| x.0.total_cmp(&y.0));
    brackets.dedup();
    brackets
}

/// Look for two roots in `[lo, hi]` where the endpoints share `sign`.
fn split_double_root(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, sign: f64) -> Vec<(f64, f64)> {
    let m = 2 * REFINE_FACTOR;
    let fine: Vec<f64> = (0..=m).map(|j| lo + (hi - lo) * j as f64 / m as f64).collect();
    let vals: Vec<f64> = fine.iter().map(|&e| f(e)).collect();
    let found: Vec<(f64, f64)> = (0..m)
        .filter(|&j| vals[j].signum() != vals[j + 1].signum())
        .map(|j| (fine[j], fine[j + 1]))
        .collect();
    if !found.is_empty() {
        return found;
    }
    let (e_min, f_min) = golden_minimum(|e| sign * f(e), lo, hi, 200);
    if f_min < 0.0 {
        vec![(lo, e_min), (e_min, hi)]
    } else {
        Vec::new()
    }
}

/// All bound states of `cfg`, ascending in energy.
pub fn find_bound_states(cfg: &PotentialConfig) -> Vec<BoundState> {
    let windows = propagating_windows(cfg);
    let total_width = 2.0 - 2.0 * E_MARGIN;
    let a = cfg.half_width();
    let mut found: Vec<(f64, Parity, f64)> = Vec::new();
    for &(lo, hi) in &windows {
        let samples = window_samples(cfg, lo, hi, total_width);
        if samples.len() < 2 {
            continue;
        }
        for parity in [Parity::Even, Parity::Odd] {
            let f = |e: f64| {
                let q_sq = interior_q_squared(e, cfg);
                residual_raw(e, q_sq.max(0.0).sqrt(), a, parity)
            };
            for (b_lo, b_hi) in find_brackets(&f, &samples) {
                let (e, r) = if b_lo == b_hi {
                    (b_lo, f(b_lo))
                } else {
                    bisect(f, b_lo, b_hi)
                };
                found.push((e, parity, r));
            }
        }
    }
    found.sort_by(|x, y| x.0.total_cmp(&y.0));

    found
        .into_iter()
        .enumerate()
        .map(|(i, (energy, parity, residual))| {
            let z = interior_q_squared(energy, cfg).sqrt() * a;
            let z0 = z0_of(energy, cfg).unwrap_or(f64::NAN);
            let pole_residual = pole_denominator(energy, cfg);
            if !(residual.abs() < RESIDUAL_TOLERANCE && pole_residual < POLE_TOLERANCE) {
                log::warn!(
                    "level at E = {energy} ({parity}) has residual {residual:e}, pole residual {pole_residual:e}; cfg = {cfg:?}"
                );
            }
            BoundState {
                energy,
                parity,
                index: i + 1,
                z,
                z0,
                residual,
                pole_residual,
            }
        })
        .collect()
}

/// Number of sign changes of the imaginary-`q` matching residuals over the
/// `q^2 < 0` part of the bound-state window.
pub fn imaginary_q_sign_changes(cfg: &PotentialConfig) -> usize {
    let lo = -1.0 + E_MARGIN;
    let hi = 1.0 - E_MARGIN;
    let energies: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64)
        .filter(|&e| interior_q_squared(e, cfg) < 0.0)
        .collect();
    let mut changes = 0;
    for parity in [Parity::Even, Parity::Odd] {
        let vals: Vec<f64> = energies
            .iter()
            .filter_map(|&e| imaginary_q_residual(e, cfg, parity).ok())
            .filter(|v| v.is_finite())
            .collect();
        changes += vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_bound_states, OracleConfig};
    use proptest::prelude::*;

    fn cfg(v0: f64, a: f64, g_t: f64) -> PotentialConfig {
        PotentialConfig::new(v0, a, g_t).unwrap()
    }

    #[test]
    fn free_particle_has_no_levels() {
        assert!(find_bound_states(&cfg(0.0, 1.0, 1.0)).is_empty());
        assert!(find_bound_states(&cfg(0.0, 5.0, 0.25)).is_empty());
    }

    #[test]
    fn pure_scalar_window_without_states() {
        // g_t = 0, V0 = -2.5: 1 + V0 < 0 keeps q^2 <= 0 everywhere in |E| < 1
        assert!(find_bound_states(&cfg(-2.5, 5.0, 0.0)).is_empty());
    }

    #[test]
    fn shallow_vector_well_has_one_even_level_near_threshold() {
        let states = find_bound_states(&cfg(-0.2, 0.5, 1.0));
        assert_eq!(states.len(), 1);
        let s = states[0];
        assert_eq!(s.parity, Parity::Even);
        assert_eq!(s.index, 1);
        assert!(s.energy > 0.9 && s.energy < 1.0, "E = {}", s.energy);
        assert!(s.residual.abs() < RESIDUAL_TOLERANCE);
        assert!(s.pole_residual < POLE_TOLERANCE);
    }

    #[test]
    fn residual_examples() {
        // E = 0, g_t = 1, V0 = -2: q = sqrt(3), kappa = 1
        let c = cfg(-2.0, 1.0, 1.0);
        let q = 3f64.sqrt();
        let even = quantization_residual(0.0, &c, Parity::Even).unwrap();
        let odd = quantization_residual(0.0, &c, Parity::Odd).unwrap();
        assert!((even - (q.cos() - q * q.sin())).abs() < 1e-15);
        assert!((odd - (q.sin() + q * q.cos())).abs() < 1e-15);
        assert!(quantization_residual(1.0, &c, Parity::Even).unwrap_err().is_domain());
        assert!(matches!(
            quantization_residual(0.5, &cfg(0.0, 1.0, 1.0), Parity::Even),
            Err(KgError::NoInteriorMode { .. })
        ));
    }

    #[test]
    fn z0_examples() {
        assert_eq!(z0_of(0.3, &cfg(-2.0, 1.0, 0.0)).unwrap(), 0.0);
        assert!((z0_of(0.0, &cfg(-1.0, 2.5, 1.0)).unwrap() - 2.5).abs() < 1e-15);
        assert!(matches!(
            z0_of(0.0, &cfg(-3.0, 1.0, 0.0)),
            Err(KgError::NoRealZ0 { .. })
        ));
    }

    #[test]
    fn imaginary_q_branch_is_sign_definite() {
        for (v0, a, g) in [(-2.5, 5.0, 0.0), (-0.5, 1.0, 0.25), (-3.0, 0.5, 1.0), (-1.9, 5.0, 0.0)] {
            assert_eq!(imaginary_q_sign_changes(&cfg(v0, a, g)), 0);
        }
    }

    #[test]
    fn levels_agree_with_shooting_oracle() {
        let ocfg = OracleConfig::default();
        for (v0, a, g) in [(-0.8, 1.0, 1.0), (-1.5, 5.0, 0.5), (-1.0, 5.0, 0.0), (-2.4, 0.5, 1.0)] {
            let c = cfg(v0, a, g);
            let ours = find_bound_states(&c);
            let theirs = oracle_bound_states(&c, &ocfg);
            assert_eq!(ours.len(), theirs.len(), "count mismatch for {c:?}");
            for (s, (e, p)) in ours.iter().zip(&theirs) {
                assert_eq!(s.parity, *p);
                assert!((s.energy - e).abs() < 1e-7, "{} vs {e} for {c:?}", s.energy);
            }
        }
    }

    #[test]
    fn large_z0_levels_approach_infinite_well() {
        // deep wide well: z_n -> n pi / 2 for the low levels
        let states = find_bound_states(&cfg(-1.5, 100.0, 0.5));
        assert!(states.len() > 10);
        let mut sorted = states.clone();
        sorted.sort_by(|x, y| x.z.total_cmp(&y.z));
        for (n, s) in sorted.iter().take(3).enumerate() {
            let target = (n + 1) as f64 * std::f64::consts::FRAC_PI_2;
            assert!((s.z - target).abs() / target < 0.02, "z = {} vs {target}", s.z);
        }
    }

    #[test]
    fn parity_alternates_in_z() {
        let mut states = find_bound_states(&cfg(-1.5, 5.0, 0.5));
        states.sort_by(|x, y| x.z.total_cmp(&y.z));
        assert!(!states.is_empty());
        assert_eq!(states[0].parity, Parity::Even);
        for w in states.windows(2) {
            assert_ne!(w[0].parity, w[1].parity);
        }
    }

    #[test]
    fn helpers_find_roots() {
        let (x, fx) = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((x - 2f64.sqrt()).abs() < 1e-15 && fx.abs() < 1e-15);
        let (m, fm) = golden_minimum(|x| (x - 0.3).powi(2) - 1e-12, 0.0, 1.0, 200);
        assert!((m - 0.3).abs() < 1e-6 && fm < 0.0);
        // two roots within one coarse cell
        let f = |x: f64| (x - 0.5).powi(2) - 1e-10;
        let samples: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0 + 0.001).collect();
        assert_eq!(find_brackets(&f, &samples).len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn levels_satisfy_both_residual_forms(v0 in -3.0f64..-0.05, a in 0.3f64..3.0, g in 0.0f64..1.0) {
            let c = cfg(v0, a, g);
            let states = find_bound_states(&c);
            for (i, s) in states.iter().enumerate() {
                prop_assert_eq!(s.index, i + 1);
                prop_assert!(s.energy.abs() < 1.0);
                prop_assert!(s.residual.abs() < RESIDUAL_TOLERANCE);
                prop_assert!(s.pole_residual < POLE_TOLERANCE);
                // z0^2 = z^2 + (kappa a)^2
                let kappa_a = (1.0 - s.energy * s.energy).sqrt() * a;
                prop_assert!((s.z0 * s.z0 - s.z * s.z - kappa_a * kappa_a).abs() < 1e-9 * (1.0 + s.z0 * s.z0));
            }
            prop_assert!(states.windows(2).all(|w| w[0].energy <= w[1].energy));
        }

        #[test]
        fn pole_denominator_factorises(e in -0.99f64..0.99, v0 in -3.0f64..-0.05, g in 0.0f64..1.0) {
            let c = cfg(v0, 1.0, g);
            prop_assume!(interior_q_squared(e, &c) > 1e-6);
            let fe = quantization_residual(e, &c, Parity::Even).unwrap();
            let fo = quantization_residual(e, &c, Parity::Odd).unwrap();
            let d = pole_denominator(e, &c);
            prop_assert!((d - 2.0 * (fe * fo).abs()).abs() < 1e-10 * (1.0 + d));
        }
    }
}
