//! Brute-force verifiers that integrate the stationary equation directly.
//!
//! Nothing here uses the closed-form interior solution: the integrators only
//! evaluate the local coefficient of `phi'' = c(x) phi` from the pointwise
//! square potential, so agreement with the analytic solvers is a genuine
//! cross-check.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bound::Parity;
use crate::config::PotentialConfig;
use crate::error::{KgError, Result};

/// Scan resolution of the shooting solver over `(-1, 1)`.
pub const ORACLE_SCAN_POINTS: usize = 8192;
/// Distance kept from the continuum edges `E = +-1`.
pub const ORACLE_EDGE_MARGIN: f64 = 1e-9;
/// Bisection stops when the energy bracket is narrower than this.
pub const ORACLE_ENERGY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    step_count: usize,
    tolerance: f64,
}

impl OracleConfig {
    pub const MIN_STEPS: usize = 1000;

    pub fn new(step_count: usize, tolerance: f64) -> Result<Self> {
        if step_count < Self::MIN_STEPS {
            return Err(KgError::Domain(format!(
                "oracle step count must be at least {}, got {step_count}",
                Self::MIN_STEPS
            )));
        }
        if !(tolerance > 0.0) {
            return Err(KgError::Domain(format!(
                "oracle tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self { step_count, tolerance })
    }

    /// Number of fixed steps across `[-a, a]`.
    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            step_count: 20_000,
            tolerance: 1e-8,
        }
    }
}

/// `V(x) = V0 [theta(x + a) - theta(x - a)]`, with the closed interval
/// `|x| <= a` counted as inside so that interface nodes belong to the
/// region being integrated.
pub fn square_potential(cfg: &PotentialConfig, x: f64) -> f64 {
    if x.abs() <= cfg.half_width() {
        cfg.v0()
    } else {
        0.0
    }
}

/// Coefficient `c(x)` of `phi'' = c(x) phi`, read off the stationary
/// equation `-phi''/2 + ((Vs^2 - Vt^2)/2 + Vs + E Vt) phi = (E^2 - 1)/2 phi`.
fn stationary_coefficient(energy: f64, cfg: &PotentialConfig, x: f64) -> f64 {
    let v = square_potential(cfg, x);
    let vt = cfg.g_t() * v;
    let vs = cfg.g_s() * v;
    vs * vs - vt * vt + 2.0 * vs + 2.0 * energy * vt - (energy * energy - 1.0)
}

/// One classical RK4 step of `(phi, dphi)' = (dphi, c(x) phi)`.
fn rk4_step<T>(phi: T, dphi: T, x: f64, h: f64, coeff: impl Fn(f64) -> f64) -> (T, T)
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let c0 = coeff(x);
    let c_mid = coeff(x + 0.5 * h);
    let c1 = coeff(x + h);

    let k1p = dphi;
    let k1d = phi * c0;
    let k2p = dphi + k1d * (0.5 * h);
    let k2d = (phi + k1p * (0.5 * h)) * c_mid;
    let k3p = dphi + k2d * (0.5 * h);
    let k3d = (phi + k2p * (0.5 * h)) * c_mid;
    let k4p = dphi + k3d * h;
    let k4d = (phi + k3p * h) * c1;

    let w = h / 6.0;
    (
        phi + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * w,
        dphi + (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * w,
    )
}

/// Reflection and transmission by backward integration from a pure
/// transmitted wave at `x = +a` to `x = -a`.
pub fn oracle_transmission(energy: f64, cfg: &PotentialConfig, ocfg: &OracleConfig) -> Result<(f64, f64)> {
    if !(energy > 1.0) {
        return Err(KgError::Domain(format!("no incident propagating wave at E = {energy}")));
    }
    let a = cfg.half_width();
    let k = (energy * energy - 1.0).sqrt();
    let n = ocfg.step_count;
    let coeff = |x: f64| stationary_coefficient(energy, cfg, x);

    let ik = Complex64::new(0.0, k);
    let mut phi = (ik * a).exp();
    let mut dphi = ik * phi;
    for i in 0..n {
        // nodes x_i = a (1 - 2i/n) hit -a exactly at i = n
        let x = a * (1.0 - 2.0 * i as f64 / n as f64);
        let x_next = a * (1.0 - 2.0 * (i + 1) as f64 / n as f64);
        (phi, dphi) = rk4_step(phi, dphi, x, x_next - x, coeff);
    }
    if !(phi.is_finite() && dphi.is_finite()) {
        return Err(KgError::Oracle(format!(
            "non-finite state at x = -a for E = {energy}, cfg = {cfg:?}"
        )));
    }

    // phi = A+ e^{ikx} + A- e^{-ikx} at x = -a
    let slope = dphi / ik;
    let a_plus = (phi + slope) * 0.5 * (ik * a).exp();
    let a_minus = (phi - slope) * 0.5 * (-ik * a).exp();
    let inv = 1.0 / a_plus.norm_sqr();
    Ok((a_minus.norm_sqr() * inv, inv))
}

/// Shooting mismatches `phi'(a) + kappa phi(a)` for the even and odd
/// initial conditions at `x = 0`.
fn shooting_mismatch(energy: f64, cfg: &PotentialConfig, half_steps: usize) -> (f64, f64) {
    let a = cfg.half_width();
    let coeff = |x: f64| stationary_coefficient(energy, cfg, x);
    let mut even = (1.0f64, 0.0f64);
    let mut odd = (0.0f64, 1.0f64);
    for i in 0..half_steps {
        let x = a * i as f64 / half_steps as f64;
        let x_next = a * (i + 1) as f64 / half_steps as f64;
        let h = x_next - x;
        even = rk4_step(even.0, even.1, x, h, coeff);
        odd = rk4_step(odd.0, odd.1, x, h, coeff);
    }
    let kappa = (1.0 - energy * energy).max(0.0).sqrt();
    (even.1 + kappa * even.0, odd.1 + kappa * odd.0)
}

/// Bound-state energies from a shooting scan over `(-1, 1)`.
pub fn oracle_bound_states(cfg: &PotentialConfig, ocfg: &OracleConfig) -> Vec<(f64, Parity)> {
    let half_steps = ocfg.step_count.div_ceil(2);
    let lo = -1.0 + ORACLE_EDGE_MARGIN;
    let hi = 1.0 - ORACLE_EDGE_MARGIN;
    let n = ORACLE_SCAN_POINTS;
    let energies: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mismatches: Vec<(f64, f64)> = energies
        .par_iter()
        .map(|&e| shooting_mismatch(e, cfg, half_steps))
        .collect();

    let mut states = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let pick = |m: (f64, f64)| match parity {
            Parity::Even => m.0,
            Parity::Odd => m.1,
        };
        let brackets: Vec<(f64, f64, f64)> = energies
            .windows(2)
            .zip(mismatches.windows(2))
            .filter_map(|(e, m)| {
                let (f0, f1) = (pick(m[0]), pick(m[1]));
                (f0 != 0.0 && f0.signum() != f1.signum()).then_some((e[0], e[1], f0))
            })
            .collect();
        let roots: Vec<f64> = brackets
            .par_iter()
            .map(|&(mut a, mut b, mut fa)| {
                while b - a > ORACLE_ENERGY_TOL {
                    let mid = 0.5 * (a + b);
                    let fm = pick(shooting_mismatch(mid, cfg, half_steps));
                    if fm == 0.0 {
                        return mid;
                    }
                    if fm.signum() == fa.signum() {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect();
        states.extend(roots.into_iter().map(|e| (e, parity)));
    }
    states.sort_by(|x, y| x.0.total_cmp(&y.0));
    states
}
