//! Subcommand bodies. Each returns the complete text written to stdout.

use clap::Args;
use kg_core::bound::find_bound_states;
use kg_core::kinematics::interior_q_squared;
use kg_core::presets::{quantization_curves, Preset, PresetSpec};
use kg_core::scatter::{
    amplitudes, coefficients, linear_grid, resonance_energies, resonant_v0_for_energy, sweep_transmission, Regime,
};
use kg_core::spectrum::{detect_ssw, spectrum_sweep};
use kg_core::table::{json_document, Cell, SweepTable};
use kg_core::{PotentialConfig, Result};

use crate::{Failure, Format, Well};

pub const SCATTER_COLUMNS: [&str; 9] = ["E", "v0", "g_t", "half_width", "q2", "R", "T", "regime", "class"];
pub const AMPLITUDE_COLUMNS: [&str; 8] = [
    "a_minus_re",
    "a_minus_im",
    "b_plus_re",
    "b_plus_im",
    "b_minus_re",
    "b_minus_im",
    "c_plus_re",
    "c_plus_im",
];
pub const SWEEP_T_COLUMNS: [&str; 6] = ["v0", "q2", "T", "R", "regime", "class"];
pub const BOUND_COLUMNS: [&str; 6] = ["index", "E", "parity", "z", "z0", "pole_residual"];
pub const SWEEP_BOUND_COLUMNS: [&str; 9] = [
    "record",
    "v0",
    "branch_id",
    "E",
    "parity",
    "species",
    "partner_branch",
    "continuum",
    "kind",
];
pub const QUANTIZATION_COLUMNS: [&str; 4] = ["z", "lhs", "tan", "neg_cot"];

#[derive(Args)]
pub struct TransmissionRange {
    /// Take every parameter from a named preset (fig1 .. fig3).
    #[arg(long, conflicts_with_all = ["energy", "gt", "half_width", "v0_min", "v0_max", "steps"])]
    preset: Option<Preset>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    energy: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    gt: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    half_width: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    v0_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    v0_max: Option<f64>,
    #[arg(long, required_unless_present = "preset")]
    steps: Option<usize>,
}

#[derive(Args)]
pub struct SpectrumRange {
    /// Take every parameter from a named preset (fig5 .. fig9).
    #[arg(long, conflicts_with_all = ["gt", "half_width", "v0_min", "v0_max", "steps"])]
    preset: Option<Preset>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    gt: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    half_width: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    v0_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "preset")]
    v0_max: Option<f64>,
    #[arg(long, required_unless_present = "preset")]
    steps: Option<usize>,
}

fn check_steps(steps: usize) -> std::result::Result<usize, Failure> {
    if steps < 2 {
        return Err(Failure::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    Ok(steps)
}

impl TransmissionRange {
    pub fn resolve(&self) -> std::result::Result<PresetSpec, Failure> {
        if let Some(p) = self.preset {
            return match p.spec() {
                spec @ PresetSpec::Transmission { .. } => Ok(spec),
                _ => Err(Failure::Usage(format!(
                    "preset {} is not a transmission sweep",
                    p.name()
                ))),
            };
        }
        let need = "checked by the argument parser";
        Ok(PresetSpec::Transmission {
            energy: self.energy.expect(need),
            g_t: self.gt.expect(need),
            half_width: self.half_width.expect(need),
            v0_min: self.v0_min.expect(need),
            v0_max: self.v0_max.expect(need),
            steps: check_steps(self.steps.expect(need))?,
        })
    }
}

impl SpectrumRange {
    pub fn resolve(&self) -> std::result::Result<PresetSpec, Failure> {
        if let Some(p) = self.preset {
            return match p.spec() {
                spec @ PresetSpec::Spectrum { .. } => Ok(spec),
                _ => Err(Failure::Usage(format!("preset {} is not a spectrum sweep", p.name()))),
            };
        }
        let need = "checked by the argument parser";
        Ok(PresetSpec::Spectrum {
            g_t: self.gt.expect(need),
            half_width: self.half_width.expect(need),
            v0_min: self.v0_min.expect(need),
            v0_max: self.v0_max.expect(need),
            steps: check_steps(self.steps.expect(need))?,
        })
    }
}

fn render(
    format: Format,
    params: &[(&str, Cell)],
    records: &SweepTable,
    events: Option<&SweepTable>,
) -> Result<String> {
    match format {
        Format::Csv => match events {
            Some(ev) => records.to_csv_with_trailer(ev),
            None => Ok(records.to_csv()),
        },
        Format::Json => Ok(json_document(params, records, events)),
    }
}

pub fn scatter(energy: f64, well: &Well, with_amplitudes: bool, format: Format) -> Result<String> {
    let cfg = PotentialConfig::new(well.v0, well.half_width, well.gt)?;
    let (reflection, transmission) = coefficients(energy, &cfg)?;
    let mut columns: Vec<&str> = SCATTER_COLUMNS.to_vec();
    let mut row: Vec<Cell> = vec![
        energy.into(),
        well.v0.into(),
        well.gt.into(),
        well.half_width.into(),
        interior_q_squared(energy, &cfg).into(),
        reflection.into(),
        transmission.into(),
        Regime::of(energy, &cfg).label().into(),
        cfg.class().label().into(),
    ];
    if with_amplitudes {
        let sol = amplitudes(energy, &cfg)?;
        columns.extend(AMPLITUDE_COLUMNS);
        for z in [sol.ratio_a_minus, sol.ratio_b_plus, sol.ratio_b_minus, sol.ratio_c_plus] {
            row.extend([Cell::Real(z.re), Cell::Real(z.im)]);
        }
    }
    let mut table = SweepTable::new(columns);
    table.push(row)?;
    let params = [
        ("energy", Cell::Real(energy)),
        ("v0", Cell::Real(well.v0)),
        ("g_t", Cell::Real(well.gt)),
        ("half_width", Cell::Real(well.half_width)),
    ];
    render(format, &params, &table, None)
}

pub fn sweep_t(spec: &PresetSpec, format: Format) -> std::result::Result<String, Failure> {
    let PresetSpec::Transmission {
        energy,
        g_t,
        half_width,
        v0_min,
        v0_max,
        steps,
    } = *spec
    else {
        return Err(Failure::Usage("not a transmission sweep".into()));
    };
    let sweep = sweep_transmission(energy, g_t, half_width, &linear_grid(v0_min, v0_max, steps))?;
    let mut table = SweepTable::new(SWEEP_T_COLUMNS);
    for r in &sweep.records {
        table.push(vec![
            r.v0.into(),
            r.q_squared.into(),
            r.transmission.into(),
            r.reflection.into(),
            r.regime.label().into(),
            r.class.label().into(),
        ])?;
    }
    let params = [
        ("energy", Cell::Real(energy)),
        ("g_t", Cell::Real(g_t)),
        ("half_width", Cell::Real(half_width)),
        ("v0_min", Cell::Real(v0_min)),
        ("v0_max", Cell::Real(v0_max)),
        ("steps", Cell::from(steps)),
    ];
    Ok(render(format, &params, &table, None)?)
}

pub fn bound(well: &Well, format: Format) -> Result<String> {
    let cfg = PotentialConfig::new(well.v0, well.half_width, well.gt)?;
    let mut table = SweepTable::new(BOUND_COLUMNS);
    for s in find_bound_states(&cfg) {
        table.push(vec![
            s.index.into(),
            s.energy.into(),
            s.parity.label().into(),
            s.z.into(),
            s.z0.into(),
            s.pole_residual.into(),
        ])?;
    }
    let params = [
        ("v0", Cell::Real(well.v0)),
        ("g_t", Cell::Real(well.gt)),
        ("half_width", Cell::Real(well.half_width)),
    ];
    render(format, &params, &table, None)
}

pub fn sweep_bound(spec: &PresetSpec, format: Format) -> std::result::Result<String, Failure> {
    let PresetSpec::Spectrum {
        g_t,
        half_width,
        v0_min,
        v0_max,
        steps,
    } = *spec
    else {
        return Err(Failure::Usage("not a spectrum sweep".into()));
    };
    let sweep = spectrum_sweep(g_t, half_width, &linear_grid(v0_min, v0_max, steps))?;
    let critical = detect_ssw(&sweep);

    let mut levels = SweepTable::new(SWEEP_BOUND_COLUMNS);
    for (i, &v0) in sweep.v0_grid.iter().enumerate() {
        for (id, s) in sweep.states_at(i) {
            levels.push(vec![
                "level".into(),
                v0.into(),
                id.into(),
                s.energy.into(),
                s.parity.label().into(),
                sweep.branches[id].species.label().into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ])?;
        }
    }

    let mut events = SweepTable::new(SWEEP_BOUND_COLUMNS);
    for c in &critical {
        let branch = &sweep.branches[c.branches.0];
        events.push(vec![
            "ssw".into(),
            c.v0_critical.into(),
            c.branches.0.into(),
            c.energy_critical.into(),
            branch.parity.label().into(),
            branch.species.label().into(),
            c.branches.1.into(),
            Cell::Empty,
            "coalesced".into(),
        ])?;
    }
    for ev in &sweep.continuum_events {
        let branch = &sweep.branches[ev.branch];
        events.push(vec![
            "continuum".into(),
            ev.v0.into(),
            ev.branch.into(),
            ev.energy.into(),
            branch.parity.label().into(),
            branch.species.label().into(),
            Cell::Empty,
            ev.continuum.label().into(),
            ev.kind.label().into(),
        ])?;
    }

    let params = [
        ("g_t", Cell::Real(g_t)),
        ("half_width", Cell::Real(half_width)),
        ("v0_min", Cell::Real(v0_min)),
        ("v0_max", Cell::Real(v0_max)),
        ("steps", Cell::from(steps)),
    ];
    Ok(render(format, &params, &levels, Some(&events))?)
}

pub fn resonances(
    g_t: f64,
    half_width: f64,
    v0: Option<f64>,
    energy: Option<f64>,
    n_max: u32,
    format: Format,
) -> Result<String> {
    let (rows, value_column, mut params) = match (v0, energy) {
        (Some(v0), _) => {
            let cfg = PotentialConfig::new(v0, half_width, g_t)?;
            (resonance_energies(&cfg, n_max)?, "E", vec![("v0", Cell::Real(v0))])
        }
        (None, Some(e)) => {
            let mut all = Vec::new();
            for n in 1..=n_max {
                all.extend(resonant_v0_for_energy(e, g_t, half_width, n)?);
            }
            (all, "v0", vec![("energy", Cell::Real(e))])
        }
        (None, None) => unreachable!("the argument parser requires --v0 or --energy"),
    };
    let mut table = SweepTable::new(["n", value_column, "T", "verified"]);
    for r in &rows {
        table.push(vec![
            r.n.into(),
            r.value.into(),
            r.transmission.into(),
            r.verified().into(),
        ])?;
    }
    params.extend([
        ("g_t", Cell::Real(g_t)),
        ("half_width", Cell::Real(half_width)),
        ("n_max", Cell::from(n_max)),
    ]);
    render(format, &params, &table, None)
}

pub fn preset(p: Preset, format: Format) -> std::result::Result<String, Failure> {
    match p.spec() {
        spec @ PresetSpec::Transmission { .. } => sweep_t(&spec, format),
        spec @ PresetSpec::Spectrum { .. } => sweep_bound(&spec, format),
        PresetSpec::Quantization { z0, steps } => {
            let mut table = SweepTable::new(QUANTIZATION_COLUMNS);
            for pt in quantization_curves(z0, steps) {
                table.push(vec![pt.z.into(), pt.lhs.into(), pt.tan.into(), pt.neg_cot.into()])?;
            }
            let params = [("z0", Cell::Real(z0)), ("steps", Cell::from(steps))];
            Ok(render(format, &params, &table, None)?)
        }
    }
}
