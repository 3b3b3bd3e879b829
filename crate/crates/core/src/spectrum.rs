//! Level curves over a grid of well depths, and detection of the
//! particle/antiparticle level coalescence (Schiff-Snyder-Weinberg effect).

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{find_bound_states, golden_minimum, BoundState, Parity, E_MARGIN};
use crate::config::PotentialConfig;
use crate::error::Result;
use crate::kinematics::interior_q_squared;
use crate::scatter::check_monotone;

/// Lower bound on the energy jump allowed when linking levels across grid points.
pub const BRANCH_JUMP_FLOOR: f64 = 1e-3;
/// Multiplier on `|dV0| * |dE/dV0|` for the linking gate.
pub const BRANCH_JUMP_FACTOR: f64 = 5.0;
/// Slope assumed for a branch with a single point.
pub const DEFAULT_LEVEL_SLOPE: f64 = 1.0;
/// Bisection on the depth stops below this bracket width.
pub const SSW_V0_TOLERANCE: f64 = 1e-9;

const WINDOW_SAMPLES: usize = 64;
const EDGE_FRACTION: f64 = 1e-3;

/// Which continuum a level is tied to; `Upper` is `E = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Continuum {
    Upper,
    Lower,
}

impl Continuum {
    fn nearest(energy: f64) -> Self {
        if energy >= 0.0 {
            Continuum::Upper
        } else {
            Continuum::Lower
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Continuum::Upper => "upper",
            Continuum::Lower => "lower",
        }
    }
}

/// Metadata label: a branch whose weak-potential end sits near `E = +1` is a
/// particle level, near `E = -1` an antiparticle level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Species {
    Particle,
    Antiparticle,
}

impl Species {
    pub fn label(&self) -> &'static str {
        match self {
            Species::Particle => "particle",
            Species::Antiparticle => "antiparticle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub grid_index: usize,
    pub v0: f64,
    pub state: BoundState,
}

/// One level followed across the grid with constant parity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub id: usize,
    pub parity: Parity,
    pub species: Species,
    pub points: Vec<BranchPoint>,
}

impl Branch {
    fn last(&self) -> &BranchPoint {
        self.points.last().expect("branches are never empty")
    }

    fn slope_estimate(&self) -> f64 {
        match self.points.as_slice() {
            [.., p, q] => ((q.state.energy - p.state.energy) / (q.v0 - p.v0)).abs(),
            _ => DEFAULT_LEVEL_SLOPE,
        }
    }
}

/// Whether a branch ends or starts at a grid transition, read in grid order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryKind {
    Appeared,
    Vanished,
}

impl BoundaryKind {
    pub fn label(&self) -> &'static str {
        match self {
            BoundaryKind::Appeared => "appeared",
            BoundaryKind::Vanished => "vanished",
        }
    }
}

/// A level entering or leaving the spectrum through a continuum edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuumEvent {
    /// Grid point where the level is last (or first) present.
    pub v0: f64,
    pub branch: usize,
    pub energy: f64,
    pub continuum: Continuum,
    pub kind: BoundaryKind,
}

/// A coalescence candidate confirmed on the grid: two adjacent same-parity
/// levels present at `v0_paired` and a double-root-free window at `v0_empty`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SswEvent {
    pub branches: (usize, usize),
    pub parity: Parity,
    pub v0_paired: f64,
    pub v0_empty: f64,
    /// Energy window that holds both levels and nothing else of that parity.
    pub window: (f64, f64),
    /// Coarse estimate: grid midpoint in depth, extremum location in energy.
    pub v0_estimate: f64,
    pub energy_estimate: f64,
}

/// Refined coalescence point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SswCritical {
    pub v0_critical: f64,
    pub energy_critical: f64,
    pub v0_bracket_width: f64,
    pub branches: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSweep {
    pub g_t: f64,
    pub half_width: f64,
    pub v0_grid: Vec<f64>,
    pub branches: Vec<Branch>,
    pub ssw_events: Vec<SswEvent>,
    pub continuum_events: Vec<ContinuumEvent>,
}

impl SpectrumSweep {
    /// States at one grid point, tagged with their branch id.
    pub fn states_at(&self, grid_index: usize) -> Vec<(usize, BoundState)> {
        let mut out: Vec<(usize, BoundState)> = self
            .branches
            .iter()
            .flat_map(|b| {
                b.points
                    .iter()
                    .filter(move |p| p.grid_index == grid_index)
                    .map(move |p| (b.id, p.state))
            })
            .collect();
        out.sort_by(|x, y| x.1.energy.total_cmp(&y.1.energy));
        out
    }

    fn config_at(&self, v0: f64) -> PotentialConfig {
        PotentialConfig::new(v0, self.half_width, self.g_t).expect("validated when the sweep was built")
    }
}

fn parity_residual(cfg: &PotentialConfig, parity: Parity) -> impl Fn(f64) -> f64 + '_ {
    move |e: f64| {
        let q = interior_q_squared(e, cfg).max(0.0).sqrt();
        let kappa = (1.0 - e * e).max(0.0).sqrt();
        let (s, c) = (q * cfg.half_width()).sin_cos();
        match parity {
            Parity::Even => kappa * c - q * s,
            Parity::Odd => kappa * s + q * c,
        }
    }
}

/// Minimum of `sign * residual` over the window and where it sits.
/// Negative means two roots in the window, positive none.
fn window_extremum(cfg: &PotentialConfig, parity: Parity, window: (f64, f64), sign: f64) -> (f64, f64) {
    let f = parity_residual(cfg, parity);
    let g = |e: f64| sign * f(e);
    let (lo, hi) = window;
    let step = (hi - lo) / WINDOW_SAMPLES as f64;
    let best = (0..=WINDOW_SAMPLES)
        .map(|j| lo + step * j as f64)
        .min_by(|x, y| g(*x).total_cmp(&g(*y)))
        .expect("non-empty sample set");
    golden_minimum(g, (best - step).max(lo), (best + step).min(hi), 200)
}

/// Build the SSW window around two adjacent levels, bounded by their
/// same-parity neighbours.
fn pair_window(lower: f64, upper: f64, neighbours: &[f64]) -> (f64, f64) {
    let gap = upper - lower;
    let mut lo = lower - 0.5 * gap;
    let mut hi = upper + 0.5 * gap;
    for &e in neighbours {
        if e < lower {
            lo = lo.max(0.5 * (e + lower));
        } else if e > upper {
            hi = hi.min(0.5 * (e + upper));
        }
    }
    (lo.max(-1.0 + E_MARGIN), hi.min(1.0 - E_MARGIN))
}

struct PairCandidate {
    ids: (usize, usize),
    energies: (f64, f64),
    parity: Parity,
    paired_index: usize,
    empty_index: usize,
}

fn confirm_pair(
    sweep_g_t: f64,
    half_width: f64,
    grid: &[f64],
    levels: &[Vec<BoundState>],
    cand: &PairCandidate,
) -> Option<SswEvent> {
    let (v_paired, v_empty) = (grid[cand.paired_index], grid[cand.empty_index]);
    let paired_cfg = PotentialConfig::new(v_paired, half_width, sweep_g_t).ok()?;
    let empty_cfg = PotentialConfig::new(v_empty, half_width, sweep_g_t).ok()?;
    let neighbours: Vec<f64> = levels[cand.paired_index]
        .iter()
        .filter(|s| s.parity == cand.parity)
        .map(|s| s.energy)
        .filter(|&e| e != cand.energies.0 && e != cand.energies.1)
        .collect();
    let window = pair_window(cand.energies.0, cand.energies.1, &neighbours);
    if !(window.1 > window.0) {
        return None;
    }
    let f = parity_residual(&paired_cfg, cand.parity);
    let (f_lo, f_hi) = (f(window.0), f(window.1));
    if f_lo.signum() != f_hi.signum() || f_lo == 0.0 {
        return None;
    }
    let sign = f_lo.signum();
    let (e_paired, g_paired) = window_extremum(&paired_cfg, cand.parity, window, sign);
    let (e_empty, g_empty) = window_extremum(&empty_cfg, cand.parity, window, sign);
    let edge = EDGE_FRACTION * (window.1 - window.0);
    let interior = |e: f64| e > window.0 + edge && e < window.1 - edge;
    if !(g_paired < 0.0 && g_empty > 0.0 && interior(e_empty)) {
        return None;
    }
    Some(SswEvent {
        branches: cand.ids,
        parity: cand.parity,
        v0_paired: v_paired,
        v0_empty: v_empty,
        window,
        v0_estimate: 0.5 * (v_paired + v_empty),
        energy_estimate: 0.5 * (e_paired + e_empty),
    })
}

/// Adjacent same-parity pairs among `ids` in the spectrum at `index`.
fn adjacent_pairs(
    levels: &[BoundState],
    ids_at: &[usize],
    ending: &[usize],
    paired_index: usize,
    empty_index: usize,
) -> Vec<PairCandidate> {
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let same: Vec<(usize, f64)> = levels
            .iter()
            .zip(ids_at)
            .filter(|(s, _)| s.parity == parity)
            .map(|(s, &id)| (id, s.energy))
            .collect();
        let mut j = 0;
        while j + 1 < same.len() {
            let (a, b) = (same[j], same[j + 1]);
            if ending.contains(&a.0) && ending.contains(&b.0) {
                out.push(PairCandidate {
                    ids: (a.0, b.0),
                    energies: (a.1, b.1),
                    parity,
                    paired_index,
                    empty_index,
                });
                j += 2;
            } else {
                j += 1;
            }
        }
    }
    out
}

/// Bound-state levels over `v0_grid`, linked into branches, with level
/// births/deaths classified as continuum events or coalescences.
pub fn spectrum_sweep(g_t: f64, half_width: f64, v0_grid: &[f64]) -> Result<SpectrumSweep> {
    check_monotone(v0_grid)?;
    let configs = v0_grid
        .iter()
        .map(|&v0| PotentialConfig::new(v0, half_width, g_t))
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<Vec<BoundState>> = configs.par_iter().map(find_bound_states).collect();

    let mut branches: Vec<Branch> = Vec::new();
    // branch id for every state at the previous grid point
    let mut prev_ids: Vec<usize> = Vec::new();
    let mut ssw_events = Vec::new();
    let mut continuum_events = Vec::new();

    for (i, states) in levels.iter().enumerate() {
        let mut ids = vec![usize::MAX; states.len()];
        if i > 0 {
            let dv = (v0_grid[i] - v0_grid[i - 1]).abs();
            let prev_states = &levels[i - 1];
            let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
            for (pi, ps) in prev_states.iter().enumerate() {
                let branch = &branches[prev_ids[pi]];
                let limit = (BRANCH_JUMP_FACTOR * dv * branch.slope_estimate()).max(BRANCH_JUMP_FLOOR);
                for (ci, cs) in states.iter().enumerate() {
                    let d = (cs.energy - ps.energy).abs();
                    if cs.parity == ps.parity && d <= limit {
                        candidates.push((d, pi, ci));
                    }
                }
            }
            candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
            let mut prev_used = vec![false; prev_states.len()];
            for (_, pi, ci) in candidates {
                if !prev_used[pi] && ids[ci] == usize::MAX {
                    prev_used[pi] = true;
                    ids[ci] = prev_ids[pi];
                }
            }
            let vanished: Vec<usize> = (0..prev_states.len())
                .filter(|&pi| !prev_used[pi])
                .map(|pi| prev_ids[pi])
                .collect();
            // assign new branch ids before pairing births
            for (ci, cs) in states.iter().enumerate() {
                if ids[ci] == usize::MAX {
                    ids[ci] = branches.len();
                    branches.push(Branch {
                        id: ids[ci],
                        parity: cs.parity,
                        species: Species::Particle,
                        points: Vec::new(),
                    });
                }
            }
            let appeared: Vec<usize> = ids
                .iter()
                .copied()
                .filter(|id| branches[*id].points.is_empty())
                .collect();

            let mut paired: Vec<usize> = Vec::new();
            let mut pairs = adjacent_pairs(prev_states, &prev_ids, &vanished, i - 1, i);
            pairs.extend(adjacent_pairs(states, &ids, &appeared, i, i - 1));
            for cand in pairs {
                if let Some(ev) = confirm_pair(g_t, half_width, v0_grid, &levels, &cand) {
                    paired.extend([cand.ids.0, cand.ids.1]);
                    ssw_events.push(ev);
                }
            }
            for (pi, ps) in prev_states.iter().enumerate() {
                let id = prev_ids[pi];
                if vanished.contains(&id) && !paired.contains(&id) {
                    continuum_events.push(ContinuumEvent {
                        v0: v0_grid[i - 1],
                        branch: id,
                        energy: ps.energy,
                        continuum: Continuum::nearest(ps.energy),
                        kind: BoundaryKind::Vanished,
                    });
                }
            }
            for (ci, cs) in states.iter().enumerate() {
                if appeared.contains(&ids[ci]) && !paired.contains(&ids[ci]) {
                    continuum_events.push(ContinuumEvent {
                        v0: v0_grid[i],
                        branch: ids[ci],
                        energy: cs.energy,
                        continuum: Continuum::nearest(cs.energy),
                        kind: BoundaryKind::Appeared,
                    });
                }
            }
        } else {
            for (ci, cs) in states.iter().enumerate() {
                ids[ci] = branches.len();
                branches.push(Branch {
                    id: ids[ci],
                    parity: cs.parity,
                    species: Species::Particle,
                    points: Vec::new(),
                });
            }
        }
        for (ci, cs) in states.iter().enumerate() {
            branches[ids[ci]].points.push(BranchPoint {
                grid_index: i,
                v0: v0_grid[i],
                state: *cs,
            });
        }
        prev_ids = ids;
    }

    for b in &mut branches {
        let first = &b.points[0];
        let last = b.last();
        let weak = if first.v0.abs() <= last.v0.abs() { first } else { last };
        b.species = if weak.state.energy >= 0.0 {
            Species::Particle
        } else {
            Species::Antiparticle
        };
    }

    Ok(SpectrumSweep {
        g_t,
        half_width,
        v0_grid: v0_grid.to_vec(),
        branches,
        ssw_events,
        continuum_events,
    })
}

/// Refine every coalescence of a sweep by bisection in depth on the root
/// count (0 or 2) of the parity residual inside the event's energy window.
pub fn detect_ssw(sweep: &SpectrumSweep) -> Vec<SswCritical> {
    sweep
        .ssw_events
        .iter()
        .filter_map(|ev| {
            let window = ev.window;
            let paired_cfg = sweep.config_at(ev.v0_paired);
            let f = parity_residual(&paired_cfg, ev.parity);
            let sign = f(window.0).signum();
            let two_roots = |v0: f64| window_extremum(&sweep.config_at(v0), ev.parity, window, sign).1 < 0.0;

            let (mut paired, mut empty) = (ev.v0_paired, ev.v0_empty);
            while (paired - empty).abs() >= SSW_V0_TOLERANCE {
                let mid = 0.5 * (paired + empty);
                if mid == paired || mid == empty {
                    break;
                }
                if two_roots(mid) {
                    paired = mid;
                } else {
                    empty = mid;
                }
            }
            let v0_critical = 0.5 * (paired + empty);
            let (energy_critical, _) = window_extremum(&sweep.config_at(v0_critical), ev.parity, window, sign);
            (energy_critical.abs() < 1.0 - E_MARGIN).then_some(SswCritical {
                v0_critical,
                energy_critical,
                v0_bracket_width: (paired - empty).abs(),
                branches: ev.branches,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::linear_grid;

    fn sweep(g_t: f64, a: f64, lo: f64, hi: f64, steps: usize) -> SpectrumSweep {
        spectrum_sweep(g_t, a, &linear_grid(lo, hi, steps)).unwrap()
    }

    #[test]
    fn vector_well_levels_coalesce() {
        let s = sweep(1.0, 0.5, -4.0, -0.01, 800);
        assert!(!s.ssw_events.is_empty(), "no coalescence found");
        let crit = detect_ssw(&s);
        assert_eq!(crit.len(), s.ssw_events.len());
        for c in &crit {
            assert!(c.v0_bracket_width < SSW_V0_TOLERANCE);
            assert!(c.energy_critical.abs() < 1.0);
            let cfg = PotentialConfig::new(c.v0_critical, 0.5, 1.0).unwrap();
            let ev = s.ssw_events.iter().find(|e| e.branches == c.branches).unwrap();
            let f = parity_residual(&cfg, ev.parity);
            // double root: value and slope both vanish
            let h = 1e-5;
            assert!(f(c.energy_critical).abs() < 1e-6, "f = {}", f(c.energy_critical));
            assert!(((f(c.energy_critical + h) - f(c.energy_critical - h)) / (2.0 * h)).abs() < 1e-3);
        }
    }

    #[test]
    fn mixed_coupling_coalesces_between_known_depths() {
        let s = sweep(0.75, 0.5, -6.0, -0.01, 600);
        let crit = detect_ssw(&s);
        assert!(
            crit.iter().any(|c| c.v0_critical < -2.5 && c.v0_critical > -3.0),
            "{crit:?}"
        );
    }

    #[test]
    fn no_coalescence_at_or_below_half_vector_coupling() {
        for (g, lo) in [(0.5, -4.0), (0.25, -4.5), (0.0, -1.99)] {
            let s = sweep(g, 5.0, lo, -0.01, 400);
            assert!(s.ssw_events.is_empty(), "g_t = {g}: {:?}", s.ssw_events);
        }
    }

    #[test]
    fn branches_are_continuous_and_single_parity() {
        let s = sweep(1.0, 0.5, -4.0, -0.01, 400);
        for b in &s.branches {
            assert!(b.points.iter().all(|p| p.state.parity == b.parity));
            for w in b.points.windows(2) {
                assert_eq!(w[1].grid_index, w[0].grid_index + 1);
            }
        }
        for i in 0..s.v0_grid.len() {
            let states = s.states_at(i);
            assert!(states.windows(2).all(|w| w[0].1.energy <= w[1].1.energy));
        }
        // the shallow end holds the particle ground state only
        let last = s.states_at(s.v0_grid.len() - 1);
        assert_eq!(last.len(), 1);
        let owner = &s.branches[last[0].0];
        assert_eq!(owner.species, Species::Particle);
        assert_eq!(owner.parity, Parity::Even);
    }

    #[test]
    fn rejects_non_monotone_grid() {
        assert!(spectrum_sweep(1.0, 0.5, &[-1.0, -2.0, -1.5]).is_err());
    }
}
