//! `kgsq`: scattering, resonances and bound-state spectra of the Klein-Gordon
//! square potential, written as CSV or JSON tables on standard output.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kg_core::presets::Preset;
use kg_core::KgError;

const ABOUT_UNITS: &str = "\
Units are fixed: hbar = c = m = 1.

  energies and potentials   in units of mc^2
  lengths (--half-width)    in units of the Compton wavelength hbar/(mc)

The vector part of the potential is g_t V0 and the scalar part is
(1 - g_t) V0. There are no unit flags.
";

#[derive(Parser)]
#[command(name = "kgsq", version, about = "Klein-Gordon square potential solver")]
struct Cli {
    /// Print the unit convention and exit.
    #[arg(long)]
    about_units: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args)]
pub struct Well {
    /// Potential strength V0 in mc^2.
    #[arg(long, allow_hyphen_values = true)]
    pub v0: f64,
    /// Vector coupling fraction g_t.
    #[arg(long, allow_hyphen_values = true)]
    pub gt: f64,
    /// Half width a in Compton wavelengths.
    #[arg(long, allow_hyphen_values = true)]
    pub half_width: f64,
}

#[derive(Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// R, T and regime for one configuration.
    Scatter {
        /// Incident energy (> 1).
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
        #[command(flatten)]
        well: Well,
        /// Also print the amplitude ratios as (re, im) pairs.
        #[arg(long)]
        with_amplitudes: bool,
        #[command(flatten)]
        out: Output,
    },
    /// T and R over an evenly spaced range of V0.
    SweepT {
        #[command(flatten)]
        range: commands::TransmissionRange,
        #[command(flatten)]
        out: Output,
    },
    /// Bound states of one configuration.
    Bound {
        #[command(flatten)]
        well: Well,
        #[command(flatten)]
        out: Output,
    },
    /// Bound-state levels over a range of V0, with coalescence and continuum events.
    SweepBound {
        #[command(flatten)]
        range: commands::SpectrumRange,
        #[command(flatten)]
        out: Output,
    },
    /// Resonance energies at fixed V0, or resonant V0 at fixed energy.
    Resonances {
        #[arg(long, allow_hyphen_values = true)]
        gt: f64,
        #[arg(long, allow_hyphen_values = true)]
        half_width: f64,
        /// Energies mode: resonance energies of this well.
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "energy",
            required_unless_present = "energy"
        )]
        v0: Option<f64>,
        /// Depths mode: strengths V0 that are resonant at this energy.
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Run a named plot preset (fig1 .. fig9).
    Preset {
        name: Preset,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Usage(String),
    Core(KgError),
}

impl From<KgError> for Failure {
    fn from(e: KgError) -> Self {
        Failure::Core(e)
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Scatter {
            energy,
            well,
            with_amplitudes,
            out,
        } => Ok(commands::scatter(energy, &well, with_amplitudes, out.format)?),
        Command::SweepT { range, out } => commands::sweep_t(&range.resolve()?, out.format),
        Command::Bound { well, out } => Ok(commands::bound(&well, out.format)?),
        Command::SweepBound { range, out } => commands::sweep_bound(&range.resolve()?, out.format),
        Command::Resonances {
            gt,
            half_width,
            v0,
            energy,
            n_max,
            out,
        } => Ok(commands::resonances(gt, half_width, v0, energy, n_max, out.format)?),
        Command::Preset { name, out } => commands::preset(name, out.format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if cli.about_units {
        print!("{ABOUT_UNITS}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(1);
    };
    match run(command) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_domain() { 2 } else { 3 })
        }
    }
}
